"""End-to-end runs: load -> downsample -> preprocess -> featurize -> train -> evaluate."""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..corpus import DatasetSplit, SplitKind, downsample, load_split
from ..errors import SchemaError, StageError
from ..features import Featurizer, Vocabulary
from ..metrics import EvalReport, classwise_markdown, evaluate
from ..models import TrainedModel, load_model, predict, save_model, train
from ..preprocess import EMPTY_STOPWORDS, StopwordSet, default_stopwords, load_stopwords, preprocess_document
from .config import ExperimentConfig, load_config, parse_config_text

log = logging.getLogger(__name__)

RECORD_FILE = "run_record.json"
MODEL_FILE = "model.npz"
VOCAB_FILE = "vocab.tsv"
CONFIG_FILE = "config.cfg"
STOPWORDS_FILE = "stopwords.txt"
SPLITS = ("train", "dev", "test")


def _stage(name):
    def wrap(fn):
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except StageError:
                raise
            except Exception as exc:
                raise StageError(name, exc) from exc
        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner
    return wrap


def split_digest(split: DatasetSplit) -> str:
    h = hashlib.sha256()
    for doc in split.documents:
        label = "" if doc.label is None else split.schema.name(doc.label)
        h.update(f"{doc.id}\t{doc.text}\t{label}\n".encode("utf-8"))
    return h.hexdigest()


def stopwords_for(cfg: ExperimentConfig) -> StopwordSet:
    source = cfg.data_stopwords
    if source == "none":
        return EMPTY_STOPWORDS
    if source == "default":
        return default_stopwords(cfg.clean)
    return load_stopwords(cfg.resolve(source), cfg.clean)


def stopwords_text(stops: StopwordSet) -> str:
    return f"# source_id: {stops.source_id}\n" + "".join(w + "\n" for w in sorted(stops.words))


@_stage("load")
def load_splits(cfg: ExperimentConfig) -> dict:
    schema = cfg.schema()
    splits = {}
    for name in SPLITS:
        path = cfg.resolve(getattr(cfg, f"data_{name}"))
        if path is None:
            continue
        splits[name] = load_split(path, cfg.data_format, schema, labeled=True, split_kind=SplitKind(name))
    if "train" not in splits:
        raise ValueError("config has no data.train")
    return splits


@_stage("downsample")
def downsample_splits(cfg: ExperimentConfig, splits: dict) -> dict:
    if cfg.downsample_fraction == 1:
        return splits
    return {
        name: downsample(s, cfg.downsample_fraction, cfg.seed, cfg.downsample_stratified)
        for name, s in splits.items()
    }


@_stage("preprocess")
def preprocess_splits(cfg: ExperimentConfig, splits: dict) -> dict:
    stops = stopwords_for(cfg)
    return {name: [preprocess_document(d, cfg.clean, stops) for d in s.documents] for name, s in splits.items()}


@_stage("featurize")
def featurize(cfg: ExperimentConfig, tokens: dict, splits: dict):
    featurizer = Featurizer.fit(cfg.features, tokens["train"])
    matrices = {name: featurizer.transform(tokens[name], splits[name].ids) for name in splits}
    return featurizer, matrices


@_stage("train")
def train_model(cfg: ExperimentConfig, X, train_split: DatasetSplit) -> TrainedModel:
    schema = train_split.schema
    model = train(cfg.model_kind, X, train_split.labels, schema.k, cfg.hp)
    return TrainedModel(
        model.kind, model.k, model.payload, schema.task_id, schema.classes,
        model.feature_dim, model.seed,
        {
            "feature_config_id": cfg.features.config_id(),
            "hyperparams": cfg.hp.to_dict(),
            "train_digest": split_digest(train_split),
            "config_digest": cfg.digest(),
        },
    )


def check_model_schema(model: TrainedModel, split: DatasetSplit) -> None:
    schema = split.schema
    if model.schema_id != schema.task_id or tuple(model.classes) != tuple(schema.classes):
        raise SchemaError(
            f"model was trained on schema {model.schema_id} {list(model.classes)} "
            f"but data uses schema {schema.task_id} {list(schema.classes)}"
        )


@_stage("evaluate")
def evaluate_splits(model: TrainedModel, matrices: dict, splits: dict) -> dict:
    reports = {}
    for name, split in splits.items():
        check_model_schema(model, split)
        pred = predict(model, matrices[name])
        reports[name] = evaluate(split.labels, pred, split.schema)
    return reports


@dataclass(frozen=True)
class RunRecord:
    """What a run produced. ``digest`` covers everything except wall-clock time."""

    name: str
    config_digest: str
    seed: int
    model: dict
    vocabulary_digest: str
    reports: dict  # split name -> report dict
    artifacts: dict
    wall_clock_seconds: float = 0.0
    run_dir: Optional[Path] = field(default=None, compare=False)

    def content(self) -> dict:
        return {
            "name": self.name,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "model": self.model,
            "vocabulary_digest": self.vocabulary_digest,
            "reports": self.reports,
            "artifacts": self.artifacts,
        }

    @property
    def digest(self) -> str:
        text = json.dumps(self.content(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        d = self.content()
        d["digest"] = self.digest
        d["wall_clock_seconds"] = self.wall_clock_seconds
        return json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str, run_dir: Optional[Path] = None) -> "RunRecord":
        d = json.loads(text)
        rec = cls(d["name"], d["config_digest"], d["seed"], d["model"], d["vocabulary_digest"],
                  d["reports"], d["artifacts"], d.get("wall_clock_seconds", 0.0), run_dir)
        if d.get("digest") not in (None, rec.digest):
            raise ValueError("run record digest does not match its content")
        return rec

    def report(self, split: str) -> EvalReport:
        return EvalReport.from_dict(self.reports[split])


def _model_summary(model: TrainedModel) -> dict:
    return {
        "kind": model.kind,
        "schema_id": model.schema_id,
        "classes": list(model.classes),
        "feature_dim": model.feature_dim,
        "provenance": model.provenance,
    }


def run_experiment(cfg: ExperimentConfig, out_dir: Optional[Path] = None) -> RunRecord:
    """Run the full pipeline and persist its artifacts under ``out_dir/<run name>``.

    Artifacts are written to a scratch directory first and moved into place
    only after every stage succeeded, so a failed run leaves nothing behind.
    """
    start = time.perf_counter()
    root = Path(out_dir) if out_dir is not None else cfg.output_root()
    splits = downsample_splits(cfg, load_splits(cfg))
    tokens = preprocess_splits(cfg, splits)
    featurizer, matrices = featurize(cfg, tokens, splits)
    vocab_before = featurizer.vocab.digest()
    model = train_model(cfg, matrices["train"], splits["train"])
    reports = evaluate_splits(model, matrices, splits)
    if featurizer.vocab.digest() != vocab_before:
        raise StageError("evaluate", RuntimeError("vocabulary changed during evaluation"))

    artifacts = {"config": CONFIG_FILE, "model": MODEL_FILE, "vocabulary": VOCAB_FILE, "stopwords": STOPWORDS_FILE}
    for name in reports:
        artifacts[f"report_{name}"] = f"report_{name}.json"
        artifacts[f"report_{name}_md"] = f"report_{name}.md"
    record = RunRecord(
        cfg.run_name, cfg.digest(), cfg.seed, _model_summary(model), vocab_before,
        {name: r.to_dict() for name, r in reports.items()}, artifacts,
        round(time.perf_counter() - start, 3),
    )

    root.mkdir(parents=True, exist_ok=True)
    final = root / cfg.run_name
    tmp = Path(tempfile.mkdtemp(prefix=f".{cfg.run_name}.", dir=root))
    try:
        (tmp / CONFIG_FILE).write_text(cfg.to_text(), encoding="utf-8")
        save_model(model, tmp / MODEL_FILE)
        featurizer.vocab.save(tmp / VOCAB_FILE)
        (tmp / STOPWORDS_FILE).write_text(stopwords_text(stopwords_for(cfg)), encoding="utf-8")
        for name, report in reports.items():
            (tmp / f"report_{name}.json").write_text(report.to_json(), encoding="utf-8")
            (tmp / f"report_{name}.md").write_text(classwise_markdown(report), encoding="utf-8")
        (tmp / RECORD_FILE).write_text(record.to_json(), encoding="utf-8")
        if final.exists():
            shutil.rmtree(final)
        tmp.rename(final)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    log.info("run %s finished in %.2fs", cfg.run_name, record.wall_clock_seconds)
    return RunRecord(**{**record.__dict__, "run_dir": final})


def run_from_file(path, out_dir=None, overrides: Optional[dict] = None) -> RunRecord:
    cfg = load_config(path)
    if overrides:
        cfg = cfg.with_overrides(overrides)
    return run_experiment(cfg, out_dir)


def load_run(run_dir) -> tuple:
    """(config, featurizer, model, stopwords) of a finished run directory."""
    run_dir = Path(run_dir)
    cfg = parse_config_text((run_dir / CONFIG_FILE).read_text(encoding="utf-8"))
    vocab = Vocabulary.load(run_dir / VOCAB_FILE)
    featurizer = Featurizer.fit_from_vocabulary(cfg.features, vocab)
    model = load_model(run_dir / MODEL_FILE)
    stops = load_stopwords(run_dir / STOPWORDS_FILE, cfg.clean)
    return cfg, featurizer, model, stops


def load_record(path) -> RunRecord:
    path = Path(path)
    if path.is_dir():
        path = path / RECORD_FILE
    return RunRecord.from_json(path.read_text(encoding="utf-8"), path.parent)
