"""N-gram vocabularies and sparse count / TF-IDF document vectors."""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

# ASCII unit separator; str.split() treats it as whitespace, so it never
# survives inside a token.
NGRAM_SEP = "\x1f"

NORM_NONE = "none"
NORM_L2 = "l2"

VOCAB_MAGIC = "#banglahate-vocabulary v1"


def ngrams(tokens: Sequence[str], ngram_range=(1, 1)) -> list:
    """All contiguous n-grams with ``min_n <= n <= max_n``, as joined strings."""
    min_n, max_n = ngram_range
    out = []
    for n in range(min_n, max_n + 1):
        for i in range(len(tokens) - n + 1):
            out.append(NGRAM_SEP.join(tokens[i : i + n]))
    return out


@dataclass(frozen=True)
class SparseVector:
    dim: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if idx.size:
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
            if idx[0] < 0 or idx[-1] >= self.dim:
                raise ValueError("index out of range")
            if not np.all(np.isfinite(val)) or np.any(val == 0):
                raise ValueError("values must be finite and non-zero")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @property
    def entries(self) -> list:
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values)]

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


class FeatureMatrix:
    """Rows of sparse vectors sharing one dimension, aligned with document ids.

    Stored as a CSR matrix; ``rows`` materializes :class:`SparseVector` views.
    """

    def __init__(self, csr: sp.csr_matrix, row_ids: Sequence[str]):
        csr = sp.csr_matrix(csr, dtype=np.float64)
        csr.sort_indices()
        csr.eliminate_zeros()
        if csr.shape[0] != len(row_ids):
            raise ValueError(f"{csr.shape[0]} rows but {len(row_ids)} row ids")
        self.csr = csr
        self.row_ids = list(row_ids)

    @classmethod
    def from_rows(cls, rows: Sequence[SparseVector], row_ids: Sequence[str], dim: Optional[int] = None):
        if dim is None:
            if not rows:
                raise ValueError("dim is required for an empty matrix")
            dim = rows[0].dim
        indptr = [0]
        indices, data = [], []
        for r in rows:
            if r.dim != dim:
                raise ValueError(f"row dim {r.dim} != matrix dim {dim}")
            indices.append(r.indices)
            data.append(r.values)
            indptr.append(indptr[-1] + r.indices.size)
        ind = np.concatenate(indices) if indices else np.empty(0, dtype=np.int64)
        dat = np.concatenate(data) if data else np.empty(0)
        return cls(sp.csr_matrix((dat, ind, indptr), shape=(len(rows), dim)), row_ids)

    @property
    def dim(self) -> int:
        return self.csr.shape[1]

    def __len__(self):
        return self.csr.shape[0]

    def row(self, i: int) -> SparseVector:
        lo, hi = self.csr.indptr[i], self.csr.indptr[i + 1]
        return SparseVector(self.dim, self.csr.indices[lo:hi].copy(), self.csr.data[lo:hi].copy())

    @property
    def rows(self) -> list:
        return [self.row(i) for i in range(len(self))]

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def subset(self, idx) -> "FeatureMatrix":
        idx = np.asarray(idx, dtype=np.int64)
        return FeatureMatrix(self.csr[idx], [self.row_ids[i] for i in idx])


@dataclass(frozen=True, eq=False)
class Vocabulary:
    ngram_range: tuple
    term_to_index: dict
    doc_freq: np.ndarray
    n_docs: int
    min_df: int = 1
    max_features: Optional[int] = None
    index_to_term: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = sorted(self.term_to_index, key=self.term_to_index.__getitem__)
        object.__setattr__(self, "index_to_term", terms)
        object.__setattr__(self, "ngram_range", tuple(self.ngram_range))
        object.__setattr__(self, "doc_freq", np.asarray(self.doc_freq, dtype=np.int64))

    def __len__(self):
        return len(self.term_to_index)

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.to_text() == other.to_text()

    @property
    def size(self) -> int:
        return len(self.term_to_index)

    def to_text(self) -> str:
        min_n, max_n = self.ngram_range
        mf = "none" if self.max_features is None else str(self.max_features)
        lines = [f"{VOCAB_MAGIC}\tngram_range={min_n},{max_n}\tn_docs={self.n_docs}\tmin_df={self.min_df}\tmax_features={mf}"]
        for i, term in enumerate(self.index_to_term):
            lines.append(f"{term}\t{i}\t{int(self.doc_freq[i])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Vocabulary":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines or not lines[0].startswith(VOCAB_MAGIC):
            raise ValueError("not a vocabulary file (bad header)")
        header = dict(kv.split("=", 1) for kv in lines[0].split("\t")[1:])
        min_n, max_n = (int(x) for x in header["ngram_range"].split(","))
        mf = None if header["max_features"] == "none" else int(header["max_features"])
        term_to_index = {}
        df = np.zeros(len(lines) - 1, dtype=np.int64)
        for line in lines[1:]:
            term, idx, freq = line.split("\t")
            term_to_index[term] = int(idx)
            df[int(idx)] = int(freq)
        if sorted(term_to_index.values()) != list(range(len(term_to_index))):
            raise ValueError("vocabulary indices are not dense")
        return cls((min_n, max_n), term_to_index, df, int(header["n_docs"]), int(header["min_df"]), mf)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()


def fit_vocabulary(corpus: Sequence[Sequence[str]], ngram_range=(1, 1), min_df: int = 1, max_features: Optional[int] = None) -> Vocabulary:
    """Collect n-grams with document frequency >= ``min_df``.

    With ``max_features`` only the most frequent terms by document frequency
    are kept (lexicographic order breaks ties). Column indices follow
    lexicographic term order.
    """
    min_n, max_n = ngram_range
    if min_n < 1 or max_n < min_n:
        raise ValueError(f"invalid ngram_range {ngram_range}")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if max_features is not None and max_features < 1:
        raise ValueError("max_features must be >= 1")
    if len(corpus) == 0:
        raise ValueError("cannot fit a vocabulary on an empty corpus")

    df = Counter()
    for tokens in corpus:
        df.update(set(ngrams(list(tokens), ngram_range)))
    terms = [t for t, c in df.items() if c >= min_df]
    if max_features is not None and len(terms) > max_features:
        terms.sort(key=lambda t: (-df[t], t))
        terms = terms[:max_features]
    terms.sort()
    term_to_index = {t: i for i, t in enumerate(terms)}
    doc_freq = np.array([df[t] for t in terms], dtype=np.int64)
    return Vocabulary((min_n, max_n), term_to_index, doc_freq, len(corpus), min_df, max_features)


def count_vectorize(tokens: Sequence[str], vocab: Vocabulary) -> SparseVector:
    counts = Counter()
    lookup = vocab.term_to_index
    for g in ngrams(list(tokens), vocab.ngram_range):
        j = lookup.get(g)
        if j is not None:
            counts[j] += 1
    idx = np.array(sorted(counts), dtype=np.int64)
    val = np.array([counts[j] for j in idx.tolist()], dtype=np.float64)
    return SparseVector(vocab.size, idx, val)


def count_matrix(corpus: Sequence[Sequence[str]], vocab: Vocabulary, row_ids: Optional[Sequence[str]] = None) -> FeatureMatrix:
    if row_ids is None:
        row_ids = [str(i) for i in range(len(corpus))]
    rows = [count_vectorize(toks, vocab) for toks in corpus]
    return FeatureMatrix.from_rows(rows, row_ids, dim=vocab.size)


@dataclass(frozen=True, eq=False)
class TfidfWeights:
    idf: np.ndarray
    norm: str = NORM_L2

    def __post_init__(self):
        object.__setattr__(self, "idf", np.asarray(self.idf, dtype=np.float64))
        if self.norm not in (NORM_NONE, NORM_L2):
            raise ValueError(f"norm must be 'none' or 'l2', got {self.norm!r}")

    @property
    def dim(self) -> int:
        return int(self.idf.size)


def smoothed_idf(n_docs: int, doc_freq) -> np.ndarray:
    df = np.asarray(doc_freq, dtype=np.float64)
    return np.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def fit_tfidf(counts: FeatureMatrix, vocab: Vocabulary, norm: str = NORM_L2) -> TfidfWeights:
    """idf[t] = ln((1 + N) / (1 + df[t])) + 1 from the vocabulary's fit statistics."""
    if counts.dim != vocab.size:
        raise ValueError(f"count matrix has dim {counts.dim}, vocabulary has {vocab.size} terms")
    return TfidfWeights(smoothed_idf(vocab.n_docs, vocab.doc_freq), norm)


def tfidf_transform(counts_row: SparseVector, weights: TfidfWeights) -> SparseVector:
    if counts_row.dim != weights.dim:
        raise ValueError(f"row dim {counts_row.dim} != idf dim {weights.dim}")
    values = counts_row.values * weights.idf[counts_row.indices]
    if weights.norm == NORM_L2 and values.size:
        values = values / math.sqrt(float(np.dot(values, values)))
    return SparseVector(counts_row.dim, counts_row.indices, values)


def tfidf_matrix(counts: FeatureMatrix, weights: TfidfWeights) -> FeatureMatrix:
    if counts.dim != weights.dim:
        raise ValueError(f"matrix dim {counts.dim} != idf dim {weights.dim}")
    rows = [tfidf_transform(counts.row(i), weights) for i in range(len(counts))]
    return FeatureMatrix.from_rows(rows, counts.row_ids, dim=counts.dim)


COUNT = "count"
TFIDF = "tfidf"


@dataclass(frozen=True)
class FeatureSpec:
    """How documents become vectors for one model."""

    kind: str = COUNT
    ngram_range: tuple = (1, 1)
    min_df: int = 1
    max_features: Optional[int] = 50_000
    norm: str = NORM_L2

    def __post_init__(self):
        if self.kind not in (COUNT, TFIDF):
            raise ValueError(f"feature kind must be 'count' or 'tfidf', got {self.kind!r}")
        object.__setattr__(self, "ngram_range", tuple(self.ngram_range))

    def config_id(self) -> str:
        mf = "none" if self.max_features is None else self.max_features
        lo, hi = self.ngram_range
        return f"{self.kind}:ngram={lo},{hi}:min_df={self.min_df}:max_features={mf}:norm={self.norm}"


class Featurizer:
    """A fitted vocabulary plus optional idf weights."""

    def __init__(self, spec: FeatureSpec, vocab: Vocabulary, weights: Optional[TfidfWeights] = None):
        self.spec = spec
        self.vocab = vocab
        self.weights = weights

    @classmethod
    def fit(cls, spec: FeatureSpec, corpus: Sequence[Sequence[str]]) -> "Featurizer":
        vocab = fit_vocabulary(corpus, spec.ngram_range, spec.min_df, spec.max_features)
        return cls.fit_from_vocabulary(spec, vocab)

    @classmethod
    def fit_from_vocabulary(cls, spec: FeatureSpec, vocab: Vocabulary) -> "Featurizer":
        """Rebuild a featurizer from a saved vocabulary (idf follows from its statistics)."""
        weights = None
        if spec.kind == TFIDF:
            weights = TfidfWeights(smoothed_idf(vocab.n_docs, vocab.doc_freq), spec.norm)
        return cls(spec, vocab, weights)

    @property
    def dim(self) -> int:
        return self.vocab.size

    def transform(self, corpus: Sequence[Sequence[str]], row_ids: Optional[Sequence[str]] = None) -> FeatureMatrix:
        counts = count_matrix(corpus, self.vocab, row_ids)
        if self.weights is None:
            return counts
        return tfidf_matrix(counts, self.weights)
