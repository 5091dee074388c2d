"""Experiment runner, prediction-file scoring, report tables and the CLI."""

from .config import ExperimentConfig, load_config, parse_config_text
from .experiment import RunRecord, load_record, load_run, run_experiment, run_from_file
from .report import emit_comparison, entries_from_records
from .scoring import align_predictions, read_predictions, score_predictions, write_predictions

__all__ = [
    "ExperimentConfig", "RunRecord", "align_predictions", "emit_comparison", "entries_from_records",
    "load_config", "load_record", "load_run", "parse_config_text", "read_predictions",
    "run_experiment", "run_from_file", "score_predictions", "write_predictions",
]
