"""Labeled comment datasets: schemas, loading, serialization and downsampling."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import ParseError, SchemaError, ValidationError

HATE_TYPE_CLASSES = (
    "Abusive",
    "Sexism",
    "Religious Hate",
    "Political Hate",
    "Profane",
    "None",
)
HATE_TARGET_CLASSES = ("None", "Society", "Organization", "Community", "Individual")
HATE_TARGET_CLASSES_NO_NONE = ("Individual", "Organization", "Community", "Society")


@dataclass(frozen=True)
class LabelSchema:
    """Ordered class list for one subtask; position defines the class index."""

    task_id: str
    classes: tuple

    def __post_init__(self):
        classes = tuple(self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise ValueError("a schema needs at least one class")
        if any(not isinstance(c, str) or not c for c in classes):
            raise ValueError("class names must be non-empty strings")
        if len(set(classes)) != len(classes):
            raise ValueError(f"duplicate class names in schema {self.task_id}")

    @classmethod
    def default(cls, task_id: str, include_none: bool = True) -> "LabelSchema":
        if task_id == "1A":
            return cls("1A", HATE_TYPE_CLASSES)
        if task_id == "1B":
            return cls("1B", HATE_TARGET_CLASSES if include_none else HATE_TARGET_CLASSES_NO_NONE)
        raise ValueError(f"unknown task id {task_id!r}; expected '1A' or '1B'")

    @classmethod
    def from_file(cls, path, task_id: Optional[str] = None) -> "LabelSchema":
        """Read a schema file: one class name per line, blank lines skipped."""
        path = Path(path)
        lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
        classes = [ln for ln in lines if ln and not ln.startswith("#")]
        return cls(task_id or path.stem, tuple(classes))

    def to_text(self) -> str:
        return "".join(c + "\n" for c in self.classes)

    @property
    def k(self) -> int:
        return len(self.classes)

    def index(self, name: str) -> int:
        try:
            return self.classes.index(name)
        except ValueError:
            raise SchemaError(f"label {name!r} is not a class of schema {self.task_id}") from None

    def name(self, index: int) -> str:
        return self.classes[index]


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: Optional[int] = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("document id must be non-empty")


class SplitKind(str, enum.Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass(frozen=True)
class DatasetSplit:
    split_kind: SplitKind
    schema: LabelSchema
    documents: tuple = field(default_factory=tuple)

    def __post_init__(self):
        docs = tuple(self.documents)
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "split_kind", SplitKind(self.split_kind))
        seen = set()
        for doc in docs:
            if doc.id in seen:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if doc.label is not None and not 0 <= doc.label < self.schema.k:
                raise SchemaError(f"document {doc.id!r} has label index {doc.label} outside schema")

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def ids(self) -> list:
        return [d.id for d in self.documents]

    @property
    def labels(self) -> list:
        return [d.label for d in self.documents]

    @property
    def is_labeled(self) -> bool:
        return all(d.label is not None for d in self.documents)

    def with_documents(self, documents: Iterable[Document]) -> "DatasetSplit":
        return DatasetSplit(self.split_kind, self.schema, tuple(documents))


def _split_kind_from_path(path: Path) -> SplitKind:
    stem = path.stem.lower()
    for kind in SplitKind:
        if kind.value in stem:
            return kind
    return SplitKind.TRAIN


def load_split(
    path,
    format: str = "tsv",
    schema: Optional[LabelSchema] = None,
    labeled: bool = True,
    split_kind: Union[SplitKind, str, None] = None,
) -> DatasetSplit:
    """Load a split from a TSV or JSONL file, preserving file order.

    TSV rows are ``id<TAB>text<TAB>label`` (two columns when unlabeled). JSONL
    rows are objects with ``id``, ``text`` and an optional ``label``. Label
    strings must match a schema class name exactly.

    Raises:
        ParseError: wrong column count or invalid JSON, with the line number.
        SchemaError: unknown label string, naming the value and line.
        ValidationError: duplicate id.
    """
    path = Path(path)
    if schema is None:
        raise ValueError("a LabelSchema is required")
    if format not in ("tsv", "jsonl"):
        raise ValueError(f"unsupported format {format!r}")
    kind = SplitKind(split_kind) if split_kind is not None else _split_kind_from_path(path)

    docs = []
    seen = {}
    with path.open(encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            if format == "tsv":
                cols = line.split("\t")
                want = 3 if labeled else 2
                if len(cols) != want:
                    raise ParseError(f"expected {want} tab-separated columns, got {len(cols)}", lineno, path)
                doc_id, text = cols[0], cols[1]
                label_str = cols[2] if labeled else None
            else:
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON: {exc.msg}", lineno, path) from None
                if not isinstance(obj, dict) or "id" not in obj or "text" not in obj:
                    raise ParseError("JSON row must be an object with 'id' and 'text'", lineno, path)
                doc_id, text = str(obj["id"]), obj["text"]
                if not isinstance(text, str):
                    raise ParseError("'text' must be a string", lineno, path)
                label_str = obj.get("label") if labeled else None
                if labeled and label_str is None:
                    raise ParseError("missing 'label'", lineno, path)
            if not doc_id:
                raise ParseError("empty id", lineno, path)
            label = None
            if labeled:
                try:
                    label = schema.index(label_str)
                except SchemaError:
                    raise SchemaError(
                        f"{path}:{lineno}: unknown label {label_str!r} for schema {schema.task_id}"
                    ) from None
            if doc_id in seen:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate id {doc_id!r} (first seen on line {seen[doc_id]})"
                )
            seen[doc_id] = lineno
            docs.append(Document(doc_id, text, label))
    return DatasetSplit(kind, schema, tuple(docs))


def save_split(split: DatasetSplit, path, format: str = "tsv") -> None:
    """Write a split in the same layout :func:`load_split` reads."""
    path = Path(path)
    lines = []
    for doc in split.documents:
        label = split.schema.name(doc.label) if doc.label is not None else None
        if format == "tsv":
            if any(ch in doc.text for ch in "\t\n\r"):
                raise ValueError(f"document {doc.id!r}: tabs/newlines in text need the jsonl format")
            cols = [doc.id, doc.text] + ([label] if label is not None else [])
            lines.append("\t".join(cols))
        elif format == "jsonl":
            obj = {"id": doc.id, "text": doc.text}
            if label is not None:
                obj["label"] = label
            lines.append(json.dumps(obj, ensure_ascii=False))
        else:
            raise ValueError(f"unsupported format {format!r}")
    path.write_text("".join(ln + "\n" for ln in lines), encoding="utf-8")


def _as_fraction(fraction) -> Fraction:
    if isinstance(fraction, float):
        frac = Fraction(fraction).limit_denominator(10**9)
    else:
        frac = Fraction(fraction)
    if not 0 < frac <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    return frac


def stratified_quotas(counts: Sequence[int], fraction) -> list:
    """Per-class sample sizes for stratified downsampling.

    Each class gets ``floor(fraction * count)``; the shortfall to
    ``floor(fraction * total)`` is handed out one document at a time to the
    classes with the largest fractional remainders, lower class index first
    on ties.
    """
    frac = _as_fraction(fraction)
    target = int(frac * sum(counts) // 1)
    quotas = [int(frac * c // 1) for c in counts]
    remainders = [frac * c - q for c, q in zip(counts, quotas)]
    order = sorted(range(len(counts)), key=lambda j: (-remainders[j], j))
    shortfall = target - sum(quotas)
    for j in order[:shortfall]:
        quotas[j] += 1
    return quotas


def downsample(split: DatasetSplit, fraction=Fraction(1, 3), seed: int = 0, stratified: bool = True) -> DatasetSplit:
    """Keep exactly ``floor(fraction * len(split))`` documents.

    Selection is a seeded uniform draw without replacement (within each class
    when ``stratified``); survivors keep their original relative order.
    """
    frac = _as_fraction(fraction)
    n = len(split)
    if stratified and not split.is_labeled:
        raise ValueError("stratified downsampling requires a fully labeled split")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    if not stratified:
        size = int(frac * n // 1)
        keep = rng.choice(n, size=size, replace=False) if size else np.empty(0, dtype=np.int64)
    else:
        labels = np.asarray(split.labels, dtype=np.int64)
        k = split.schema.k
        counts = np.bincount(labels, minlength=k) if n else np.zeros(k, dtype=np.int64)
        quotas = stratified_quotas(counts.tolist(), frac)
        parts = []
        for c in range(k):
            members = np.flatnonzero(labels == c)
            if quotas[c]:
                parts.append(rng.choice(members, size=quotas[c], replace=False))
        keep = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    keep = np.sort(keep)
    return split.with_documents(split.documents[i] for i in keep.tolist())


def class_distribution(split: DatasetSplit) -> dict:
    """Map class index -> (count, proportion) over the classes that occur.

    Proportions are exact :class:`fractions.Fraction` values.
    """
    if not split.is_labeled:
        raise ValueError("class_distribution requires a labeled split")
    n = len(split)
    counts = {}
    for label in split.labels:
        counts[label] = counts.get(label, 0) + 1
    return {c: (counts[c], Fraction(counts[c], n)) for c in sorted(counts)}
