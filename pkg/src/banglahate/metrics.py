"""Multiclass evaluation: confusion matrix, per-class and averaged scores.

Scores are exact :class:`fractions.Fraction` values; rounding happens only
when a report is rendered. Undefined precision or recall (zero denominator)
is scored as :data:`ZERO_DIVISION`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .corpus import LabelSchema

ZERO_DIVISION = Fraction(0)

MICRO = "micro"
MACRO = "macro"
WEIGHTED = "weighted"
AVERAGES = (MICRO, MACRO, WEIGHTED)


def _ratio(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else ZERO_DIVISION


def f1_from(p: Fraction, r: Fraction) -> Fraction:
    return 2 * p * r / (p + r) if p + r > 0 else Fraction(0)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """``cells[i, j]`` counts gold class ``i`` predicted as class ``j``."""

    k: int
    cells: np.ndarray

    def __eq__(self, other):
        return isinstance(other, ConfusionMatrix) and self.k == other.k and np.array_equal(self.cells, other.cells)

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    @property
    def tp(self) -> np.ndarray:
        return np.diag(self.cells).copy()

    @property
    def fp(self) -> np.ndarray:
        return self.cells.sum(axis=0) - self.tp

    @property
    def fn(self) -> np.ndarray:
        return self.cells.sum(axis=1) - self.tp

    @property
    def support(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    def tolist(self) -> list:
        return self.cells.tolist()


def confusion(gold: Sequence[int], pred: Sequence[int], k: int) -> ConfusionMatrix:
    gold = np.asarray(gold, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    if gold.shape != pred.shape or gold.ndim != 1:
        raise ValueError(f"gold and pred must be equal-length 1-d sequences ({gold.shape} vs {pred.shape})")
    if gold.size == 0:
        raise ValueError("cannot score zero predictions")
    for name, arr in (("gold", gold), ("pred", pred)):
        bad = np.flatnonzero((arr < 0) | (arr >= k))
        if bad.size:
            raise ValueError(f"{name} index {int(arr[bad[0]])} at position {int(bad[0])} out of range for k={k}")
    cells = np.zeros((k, k), dtype=np.int64)
    np.add.at(cells, (gold, pred), 1)
    return ConfusionMatrix(k, cells)


@dataclass(frozen=True)
class ClassMetrics:
    index: int
    precision: Fraction
    recall: Fraction
    f1: Fraction
    support: int


def per_class_metrics(cm: ConfusionMatrix) -> list:
    tp, fp, fn, support = cm.tp, cm.fp, cm.fn, cm.support
    out = []
    for c in range(cm.k):
        p = _ratio(int(tp[c]), int(tp[c] + fp[c]))
        r = _ratio(int(tp[c]), int(tp[c] + fn[c]))
        out.append(ClassMetrics(c, p, r, f1_from(p, r), int(support[c])))
    return out


def aggregate(per_class: Sequence[ClassMetrics], cm: ConfusionMatrix, mode: str) -> tuple:
    """(precision, recall, f1) averaged by ``mode``.

    ``micro`` pools TP/FP/FN over classes; ``macro`` is the unweighted mean
    of per-class scores; ``weighted`` weights them by support.
    """
    if mode == MICRO:
        tp, fp, fn = int(cm.tp.sum()), int(cm.fp.sum()), int(cm.fn.sum())
        p, r = _ratio(tp, tp + fp), _ratio(tp, tp + fn)
        return p, r, f1_from(p, r)
    if mode == MACRO:
        k = len(per_class)
        return tuple(sum((getattr(m, a) for m in per_class), Fraction(0)) / k for a in ("precision", "recall", "f1"))
    if mode == WEIGHTED:
        total = sum(m.support for m in per_class)
        if total == 0:
            return ZERO_DIVISION, ZERO_DIVISION, ZERO_DIVISION
        return tuple(
            sum((getattr(m, a) * m.support for m in per_class), Fraction(0)) / total
            for a in ("precision", "recall", "f1")
        )
    raise ValueError(f"unknown averaging mode {mode!r}")


@dataclass(frozen=True)
class EvalReport:
    schema: LabelSchema
    confusion: ConfusionMatrix
    per_class: tuple
    accuracy: Fraction
    micro: tuple
    macro: tuple
    weighted: tuple

    @property
    def n(self) -> int:
        return self.confusion.total

    micro_p = property(lambda self: self.micro[0])
    micro_r = property(lambda self: self.micro[1])
    micro_f1 = property(lambda self: self.micro[2])
    macro_p = property(lambda self: self.macro[0])
    macro_r = property(lambda self: self.macro[1])
    macro_f1 = property(lambda self: self.macro[2])
    weighted_p = property(lambda self: self.weighted[0])
    weighted_r = property(lambda self: self.weighted[1])
    weighted_f1 = property(lambda self: self.weighted[2])

    def to_dict(self) -> dict:
        def triple(t):
            return {"precision": float(t[0]), "recall": float(t[1]), "f1": float(t[2])}

        return {
            "task_id": self.schema.task_id,
            "classes": list(self.schema.classes),
            "n": self.n,
            "accuracy": float(self.accuracy),
            "micro": triple(self.micro),
            "macro": triple(self.macro),
            "weighted": triple(self.weighted),
            "per_class": [
                {
                    "class": self.schema.name(m.index),
                    "precision": float(m.precision),
                    "recall": float(m.recall),
                    "f1": float(m.f1),
                    "support": m.support,
                }
                for m in self.per_class
            ],
            "confusion": self.confusion.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        """Rebuild a report from its structured form.

        Scores are recomputed from the stored confusion matrix, so the result
        carries exact fractions again.
        """
        schema = LabelSchema(d["task_id"], tuple(d["classes"]))
        cells = np.asarray(d["confusion"], dtype=np.int64)
        return report_from_confusion(ConfusionMatrix(schema.k, cells), schema)

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        return cls.from_dict(json.loads(text))


def report_from_confusion(cm: ConfusionMatrix, schema: LabelSchema) -> EvalReport:
    per_class = per_class_metrics(cm)
    accuracy = Fraction(int(cm.tp.sum()), cm.total) if cm.total else ZERO_DIVISION
    return EvalReport(
        schema,
        cm,
        tuple(per_class),
        accuracy,
        aggregate(per_class, cm, MICRO),
        aggregate(per_class, cm, MACRO),
        aggregate(per_class, cm, WEIGHTED),
    )


def evaluate(gold: Sequence[int], pred: Sequence[int], schema: LabelSchema) -> EvalReport:
    return report_from_confusion(confusion(gold, pred, schema.k), schema)


def fmt2(x) -> str:
    """Two-decimal rendering, rounding halves away from zero like printed tables."""
    q = (Fraction(x) * 100).limit_denominator(10**12)
    n = int(q + Fraction(1, 2)) if q >= 0 else -int(-q + Fraction(1, 2))
    return f"{n / 100:.2f}"


def classwise_markdown(report: EvalReport, model_name: Optional[str] = None) -> str:
    """Per-class precision/recall/F1 block, one row per schema class."""
    lines = []
    if model_name is not None:
        lines.append("| Model | Class | Precision | Recall | F1-score |")
        lines.append("|---|---|---|---|---|")
    else:
        lines.append("| Class | Precision | Recall | F1-score | Support |")
        lines.append("|---|---|---|---|---|")
    for i, m in enumerate(report.per_class):
        name = report.schema.name(m.index)
        cells = [fmt2(m.precision), fmt2(m.recall), fmt2(m.f1)]
        if model_name is not None:
            lead = model_name if i == 0 else ""
            lines.append("| " + " | ".join([lead, name] + cells) + " |")
        else:
            lines.append("| " + " | ".join([name] + cells + [str(m.support)]) + " |")
    return "\n".join(lines) + "\n"
