"""Scoring externally produced prediction files against gold splits."""

from __future__ import annotations

from pathlib import Path

from ..corpus import DatasetSplit, LabelSchema, load_split
from ..errors import ScoringError
from ..metrics import EvalReport, evaluate


def read_predictions(path) -> list:
    """Rows of ``(id, label_name)`` from a ``id<TAB>label`` file, in file order."""
    path = Path(path)
    rows = []
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[0]:
                raise ScoringError(f"{path}:{lineno}: expected 'id<TAB>label', got {line!r}", [f"line {lineno}"])
            rows.append((cols[0], cols[1]))
    return rows


def write_predictions(path, ids, labels, schema: LabelSchema) -> None:
    text = "".join(f"{i}\t{schema.name(int(c))}\n" for i, c in zip(ids, labels))
    Path(path).write_text(text, encoding="utf-8")


def align_predictions(rows: list, gold: DatasetSplit) -> list:
    """Predicted class index for each gold document, matched by id.

    Raises :class:`ScoringError` listing every duplicate id, unknown label,
    missing gold id and id not present in the gold split.
    """
    schema = gold.schema
    by_id = {}
    duplicates, unknown = [], []
    for doc_id, label in rows:
        if doc_id in by_id:
            duplicates.append(doc_id)
            continue
        if label not in schema.classes:
            unknown.append(f"{doc_id}:{label}")
        by_id[doc_id] = label
    gold_ids = gold.ids
    gold_set = set(gold_ids)
    missing = [i for i in gold_ids if i not in by_id]
    extra = [i for i in by_id if i not in gold_set]
    problems = []
    offenders = []
    if duplicates:
        problems.append(f"duplicate ids: {', '.join(duplicates)}")
        offenders += duplicates
    if unknown:
        problems.append(f"unknown labels for schema {schema.task_id}: {', '.join(unknown)}")
        offenders += unknown
    if missing:
        problems.append(f"missing ids: {', '.join(missing)}")
        offenders += missing
    if extra:
        problems.append(f"ids not in gold: {', '.join(extra)}")
        offenders += extra
    if problems:
        raise ScoringError("; ".join(problems), offenders)
    return [schema.index(by_id[i]) for i in gold_ids]


def score_predictions(pred_path, gold_path, schema: LabelSchema, gold_format: str = "tsv") -> EvalReport:
    gold = load_split(gold_path, gold_format, schema, labeled=True)
    pred = align_predictions(read_predictions(pred_path), gold)
    return evaluate(gold.labels, pred, schema)
