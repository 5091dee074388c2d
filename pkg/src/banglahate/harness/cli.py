"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from ..corpus import LabelSchema, downsample, load_split, save_split
from ..errors import BanglaHateError, DataError, StageError
from ..metrics import classwise_markdown, evaluate
from ..models import predict, save_model
from ..preprocess import preprocess_document
from .config import ExperimentConfig, load_config
from .experiment import (
    CONFIG_FILE,
    MODEL_FILE,
    STOPWORDS_FILE,
    VOCAB_FILE,
    check_model_schema,
    downsample_splits,
    featurize,
    load_record,
    load_run,
    load_splits,
    preprocess_splits,
    run_experiment,
    stopwords_for,
    stopwords_text,
    train_model,
)
from .report import MARKDOWN, STRUCTURED, emit_comparison, entries_from_records
from .scoring import score_predictions, write_predictions

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

log = logging.getLogger("banglahate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _global_flags(for_subcommand: bool = False) -> argparse.ArgumentParser:
    # subcommand copies must not reset values given before the subcommand name
    kw = {"default": argparse.SUPPRESS} if for_subcommand else {}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="experiment config file", **kw)
    p.add_argument("--seed", type=int, help="override the config seed", **kw)
    p.add_argument("--task", choices=("1A", "1B"), help="subtask whose label schema to use", **kw)
    p.add_argument("--out", type=Path, help="output file or directory", **kw)
    p.add_argument("-v", "--verbose", action="store_true", **kw)
    return p


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None


def _key_value(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="banglahate", description="Bangla hate-speech baselines and evaluation.",
                     parents=[_global_flags()])
    g = _global_flags(for_subcommand=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def data_args(p, labeled_flag=True):
        p.add_argument("--input", type=Path, required=True, help="split file (TSV or JSONL)")
        p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
        p.add_argument("--schema", type=Path, help="schema file (one class per line)")
        if labeled_flag:
            p.add_argument("--unlabeled", action="store_true", help="input has no label column")

    p = sub.add_parser("downsample", parents=[g], help="write a downsampled copy of a split")
    data_args(p)
    p.add_argument("--fraction", type=_fraction, default=Fraction(1, 3))
    p.add_argument("--no-stratified", dest="stratified", action="store_false")

    p = sub.add_parser("prep", parents=[g], help="preprocess a split into token lists (JSONL)")
    data_args(p)

    p = sub.add_parser("train", parents=[g], help="train a model from a config (no evaluation)")
    p.add_argument("--set", dest="overrides", type=_key_value, action="append", default=[], metavar="KEY=VALUE")

    p = sub.add_parser("eval", parents=[g], help="evaluate a trained run directory on a labeled split")
    p.add_argument("--run", type=Path, required=True, help="run directory from 'train' or 'run'")
    data_args(p, labeled_flag=False)
    p.add_argument("--predictions", type=Path, help="also write id<TAB>label predictions here")

    p = sub.add_parser("score", parents=[g], help="score an id<TAB>label prediction file against gold")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv", help="gold file format")
    p.add_argument("--schema", type=Path)
    p.add_argument("--report-format", choices=(MARKDOWN, STRUCTURED), default=STRUCTURED)

    p = sub.add_parser("report", parents=[g], help="comparison table over finished runs")
    p.add_argument("runs", nargs="+", type=Path, help="run directories or run_record.json files")
    p.add_argument("--split", default="test")
    p.add_argument("--report-format", choices=(MARKDOWN, STRUCTURED), default=MARKDOWN)
    p.add_argument("--no-classwise", dest="classwise", action="store_false")

    p = sub.add_parser("run", parents=[g], help="full pipeline: load, preprocess, train, evaluate, persist")
    p.add_argument("--set", dest="overrides", type=_key_value, action="append", default=[], metavar="KEY=VALUE")
    return parser


def _schema(args) -> LabelSchema:
    if getattr(args, "schema", None):
        return LabelSchema.from_file(args.schema, args.task)
    if args.task:
        return LabelSchema.default(args.task)
    if args.config:
        return load_config(args.config).schema()
    return LabelSchema.default("1A")


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(args) -> ExperimentConfig:
    if not args.config:
        raise UsageError("--config is required")
    cfg = load_config(args.config)
    overrides = dict(getattr(args, "overrides", []) or [])
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.task:
        overrides["task"] = args.task
    return cfg.with_overrides(overrides) if overrides else cfg


def cmd_downsample(args):
    split = load_split(args.input, args.format, _schema(args), labeled=not args.unlabeled)
    seed = args.seed if args.seed is not None else 0
    out = downsample(split, args.fraction, seed, args.stratified and not args.unlabeled)
    if not args.out:
        raise UsageError("--out is required for downsample")
    save_split(out, args.out, args.format)
    print(f"{len(split)} -> {len(out)} documents written to {args.out}", file=sys.stderr)


def cmd_prep(args):
    split = load_split(args.input, args.format, _schema(args), labeled=not args.unlabeled)
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    stops = stopwords_for(cfg)
    lines = []
    for doc in split.documents:
        row = {"id": doc.id, "tokens": preprocess_document(doc, cfg.clean, stops)}
        if doc.label is not None:
            row["label"] = split.schema.name(doc.label)
        lines.append(json.dumps(row, ensure_ascii=False))
    _emit("".join(ln + "\n" for ln in lines), args.out)


def cmd_train(args):
    cfg = _config(args)
    splits = downsample_splits(cfg, load_splits(cfg))
    splits = {"train": splits["train"]}
    tokens = preprocess_splits(cfg, splits)
    featurizer, matrices = featurize(cfg, tokens, splits)
    model = train_model(cfg, matrices["train"], splits["train"])
    out = (args.out or cfg.output_root()) / cfg.run_name
    out.mkdir(parents=True, exist_ok=True)
    (out / CONFIG_FILE).write_text(cfg.to_text(), encoding="utf-8")
    featurizer.vocab.save(out / VOCAB_FILE)
    (out / STOPWORDS_FILE).write_text(stopwords_text(stopwords_for(cfg)), encoding="utf-8")
    save_model(model, out / MODEL_FILE)
    print(str(out))


def cmd_eval(args):
    cfg, featurizer, model, stops = load_run(args.run)
    if args.schema:
        schema = LabelSchema.from_file(args.schema, args.task or cfg.task)
    elif args.task:
        schema = LabelSchema.default(args.task)
    else:
        schema = cfg.schema()
    split = load_split(args.input, args.format, schema, labeled=True)
    check_model_schema(model, split)
    tokens = [preprocess_document(d, cfg.clean, stops) for d in split.documents]
    pred = predict(model, featurizer.transform(tokens, split.ids))
    report = evaluate(split.labels, pred, schema)
    if args.predictions:
        write_predictions(args.predictions, split.ids, pred, schema)
    _emit(report.to_json(), args.out)


def cmd_score(args):
    schema = _schema(args)
    report = score_predictions(args.pred, args.gold, schema, args.format)
    text = report.to_json() if args.report_format == STRUCTURED else classwise_markdown(report)
    _emit(text, args.out)


def cmd_report(args):
    records = [load_record(p) for p in args.runs]
    entries = entries_from_records(records, args.split)
    _emit(emit_comparison(entries, args.report_format, args.classwise), args.out)


def cmd_run(args):
    cfg = _config(args)
    record = run_experiment(cfg, args.out)
    print(str(record.run_dir))


COMMANDS = {
    "downsample": cmd_downsample,
    "prep": cmd_prep,
    "train": cmd_train,
    "eval": cmd_eval,
    "score": cmd_score,
    "report": cmd_report,
    "run": cmd_run,
}


def _is_data_error(exc: BaseException) -> bool:
    if isinstance(exc, StageError):
        exc = exc.cause
    return isinstance(exc, (DataError, ValueError, FileNotFoundError, KeyError))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"banglahate {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BanglaHateError, ValueError, OSError, KeyError) as exc:
        print(f"banglahate {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA if _is_data_error(exc) else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"banglahate {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
