"""Markdown and structured comparison tables over finished runs."""

from __future__ import annotations

import json
from typing import Sequence

from ..metrics import EvalReport, classwise_markdown, fmt2

MARKDOWN = "markdown"
STRUCTURED = "structured"

# (header, value getter); precision/recall/F1 are support-weighted
COLUMNS = (
    ("Accuracy", lambda r: r.accuracy),
    ("Precision", lambda r: r.weighted_p),
    ("Recall", lambda r: r.weighted_r),
    ("F1", lambda r: r.weighted_f1),
    ("Micro-F1", lambda r: r.micro_f1),
    ("Macro-F1", lambda r: r.macro_f1),
)

DISPLAY_NAMES = {
    "majority": "Majority",
    "random": "Random",
    "svm": "SVM",
    "logreg": "LR",
    "forest": "RF",
    "tree": "DT",
}


def _check_schemas(entries):
    schemas = {(r.schema.task_id, tuple(r.schema.classes)) for _, r in entries}
    if len(schemas) > 1:
        raise ValueError(f"cannot compare reports over different schemas: {sorted(s[0] for s in schemas)}")


def comparison_markdown(entries: Sequence[tuple], classwise: bool = True) -> str:
    """Model rows x metric columns; the best value in each column is bolded.

    Every row that ties the best exact value is bolded. When ``classwise`` is
    set, a per-class precision/recall/F1 block per model follows the table.
    """
    header = "| Model | " + " | ".join(h for h, _ in COLUMNS) + " |"
    lines = [header, "|---|" + "---|" * len(COLUMNS)]
    best = [max(get(r) for _, r in entries) for _, get in COLUMNS]
    for name, report in entries:
        cells = []
        for (_, get), top in zip(COLUMNS, best):
            text = fmt2(get(report))
            cells.append(f"**{text}**" if get(report) == top else text)
        lines.append(f"| {name} | " + " | ".join(cells) + " |")
    out = "\n".join(lines) + "\n"
    if classwise:
        out += "\n"
        header_done = False
        for name, report in entries:
            block = classwise_markdown(report, name)
            if header_done:
                block = "".join(block.splitlines(keepends=True)[2:])
            out += block
            header_done = True
    return out


def comparison_structured(entries: Sequence[tuple]) -> str:
    rows = []
    for name, report in entries:
        d = report.to_dict()
        d["model"] = name
        rows.append(d)
    return json.dumps({"models": rows}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_comparison(entries: Sequence[tuple], format: str = MARKDOWN, classwise: bool = True) -> str:
    """Render ``(model name, EvalReport)`` pairs as one comparison document."""
    entries = list(entries)
    if not entries:
        raise ValueError("nothing to compare")
    for _, r in entries:
        if not isinstance(r, EvalReport):
            raise TypeError("entries must be (name, EvalReport) pairs")
    _check_schemas(entries)
    if format == MARKDOWN:
        return comparison_markdown(entries, classwise)
    if format == STRUCTURED:
        return comparison_structured(entries)
    raise ValueError(f"unknown format {format!r}")


def entries_from_records(records, split: str = "test") -> list:
    """``(display name, report)`` for each run record, in the given order."""
    out = []
    for rec in records:
        kind = rec.model.get("kind", rec.name)
        out.append((DISPLAY_NAMES.get(kind, rec.name), rec.report(split)))
    return out
