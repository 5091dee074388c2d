"""Model containers, hyperparameters and the shared prediction entry point."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Union

import numpy as np

from ..errors import TrainError

MASK64 = 0xFFFFFFFFFFFFFFFF

MAJORITY = "majority"
RANDOM = "random"
LOGREG = "logreg"
SVM = "svm"
TREE = "tree"
FOREST = "forest"
MODEL_KINDS = (MAJORITY, RANDOM, SVM, LOGREG, FOREST, TREE)


@dataclass(frozen=True)
class Hyperparams:
    """Training knobs for every model family.

    ``tree_max_depth=None`` grows trees until leaves are pure or cannot be
    split. ``forest_feature_fraction`` is either a fraction in (0, 1] or the
    string ``"sqrt"``.
    """

    learning_rate: float = 0.1
    epochs: int = 30
    l2_reg: float = 1e-4
    batch_size: int = 64
    seed: int = 0
    tree_max_depth: Optional[int] = 30
    tree_min_samples_leaf: int = 1
    forest_n_trees: int = 100
    forest_feature_fraction: Union[float, str] = "sqrt"
    forest_bootstrap: bool = True

    def __post_init__(self):
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise ValueError("learning_rate must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.l2_reg < 0:
            raise ValueError("l2_reg must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.tree_max_depth is not None and self.tree_max_depth < 1:
            raise ValueError("tree_max_depth must be positive or None")
        if self.tree_min_samples_leaf < 1:
            raise ValueError("tree_min_samples_leaf must be positive")
        if self.forest_n_trees < 1:
            raise ValueError("forest_n_trees must be positive")
        ff = self.forest_feature_fraction
        if isinstance(ff, str):
            if ff != "sqrt":
                raise ValueError("forest_feature_fraction must be a number in (0, 1] or 'sqrt'")
        elif not 0 < ff <= 1:
            raise ValueError("forest_feature_fraction must be in (0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Hyperparams":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def seed64(seed: int) -> int:
    return int(seed) & MASK64


@dataclass(frozen=True)
class LinearModel:
    kind: str  # "logreg" or "svm"
    weights: np.ndarray  # (k, V)
    bias: np.ndarray  # (k,)

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X @ self.weights.T) + self.bias


@dataclass(frozen=True)
class TreeModel:
    """Flat binary tree. Leaves have ``feature == -1``; ``x[f] <= t`` goes left."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    root: int = 0

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            if self.feature[node] < 0:
                best = max(best, d)
            else:
                stack.append((int(self.left[node]), d + 1))
                stack.append((int(self.right[node]), d + 1))
        return best

    def validate(self) -> None:
        n = self.n_nodes
        seen = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not 0 <= node < n or node in seen:
                raise ValueError("tree is not a valid acyclic binary tree")
            seen.add(node)
            if self.feature[node] >= 0:
                stack.extend((int(self.left[node]), int(self.right[node])))

    def apply(self, X) -> np.ndarray:
        """Predicted class for each row of a CSR / dense matrix."""
        n = X.shape[0]
        out = np.empty(n, dtype=np.int64)
        Xc = X.tocsc() if hasattr(X, "tocsc") else np.asarray(X)
        stack = [(self.root, np.arange(n))]
        while stack:
            node, rows = stack.pop()
            if rows.size == 0:
                continue
            f = int(self.feature[node])
            if f < 0:
                out[rows] = self.value[node]
                continue
            col = _column(Xc, f, rows)
            go_left = col <= self.threshold[node]
            stack.append((int(self.left[node]), rows[go_left]))
            stack.append((int(self.right[node]), rows[~go_left]))
        return out


def _column(Xc, f: int, rows: np.ndarray) -> np.ndarray:
    if isinstance(Xc, np.ndarray):
        return Xc[rows, f]
    lo, hi = Xc.indptr[f], Xc.indptr[f + 1]
    dense = np.zeros(Xc.shape[0])
    dense[Xc.indices[lo:hi]] = Xc.data[lo:hi]
    return dense[rows]


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    tree_seeds: tuple
    seed: int


@dataclass(frozen=True)
class TrainedModel:
    """One trained baseline of any family, plus where it came from.

    ``payload`` is the class index for ``majority``, ``None`` for ``random``,
    and a :class:`LinearModel`, :class:`TreeModel` or :class:`ForestModel`
    for the others. ``feature_dim`` is ``None`` for models that ignore
    features.
    """

    kind: str
    k: int
    payload: object
    schema_id: str = ""
    classes: tuple = ()
    feature_dim: Optional[int] = None
    seed: int = 0
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "classes", tuple(self.classes))
        prov = {"feature_config_id": "", "hyperparams": {}, "train_digest": ""}
        prov.update(self.provenance)
        object.__setattr__(self, "provenance", prov)

    def with_provenance(self, **updates) -> "TrainedModel":
        prov = dict(self.provenance)
        prov.update(updates)
        return TrainedModel(self.kind, self.k, self.payload, self.schema_id, self.classes,
                            self.feature_dim, self.seed, prov)


def train_majority(y, k: int) -> TrainedModel:
    """Always predict the most frequent training class (lowest index on ties)."""
    y = np.asarray(y, dtype=np.int64)
    if y.size == 0:
        raise TrainError("cannot train a majority model on an empty label list")
    counts = np.bincount(y, minlength=k)
    return TrainedModel(MAJORITY, k, int(np.argmax(counts)))


def train_random(k: int, seed: int = 0) -> TrainedModel:
    if k < 1:
        raise ValueError("k must be >= 1")
    return TrainedModel(RANDOM, k, None, seed=seed64(seed))


def random_labels(k: int, seed: int, n: int, offset: int = 0) -> np.ndarray:
    """Uniform labels where row ``i`` draws from a stream keyed by ``(seed, i)``."""
    s = seed64(seed)
    return np.array(
        [int(np.random.default_rng([s, offset + i]).integers(k)) for i in range(n)],
        dtype=np.int64,
    )


def _n_rows(X) -> int:
    if hasattr(X, "csr"):
        return len(X)
    if hasattr(X, "shape"):
        return X.shape[0]
    return int(X)


def _matrix(X):
    return X.csr if hasattr(X, "csr") else X


def predict(model: TrainedModel, X) -> np.ndarray:
    """One class index per row; deterministic for every model kind.

    ``X`` is a :class:`FeatureMatrix` (or anything with ``shape``). Majority
    and random models only look at the row count.
    """
    n = _n_rows(X)
    if model.feature_dim is not None:
        dim = X.dim if hasattr(X, "csr") else X.shape[1]
        if dim != model.feature_dim:
            raise ValueError(f"feature dim {dim} does not match model dim {model.feature_dim}")
    if model.kind == MAJORITY:
        return np.full(n, model.payload, dtype=np.int64)
    if model.kind == RANDOM:
        return random_labels(model.k, model.seed, n)
    M = _matrix(X)
    if model.kind in (LOGREG, SVM):
        scores = model.payload.decision_function(M)
        return np.argmax(scores, axis=1).astype(np.int64)
    if model.kind == TREE:
        return model.payload.apply(M)
    if model.kind == FOREST:
        return forest_vote(model.payload, M, model.k)
    raise ValueError(f"unknown model kind {model.kind!r}")


def forest_vote(forest: ForestModel, M, k: int) -> np.ndarray:
    """Plurality vote over trees; lowest class index wins ties."""
    n = M.shape[0]
    votes = np.zeros((n, k), dtype=np.int64)
    rows = np.arange(n)
    for tree in forest.trees:
        votes[rows, tree.apply(M)] += 1
    return np.argmax(votes, axis=1).astype(np.int64)


def scale_linear(model: TrainedModel, factor: float) -> TrainedModel:
    """Multiply weights and biases by ``factor`` (argmax is invariant for factor > 0)."""
    lin = model.payload
    scaled = LinearModel(lin.kind, lin.weights * factor, lin.bias * factor)
    return TrainedModel(model.kind, model.k, scaled, model.schema_id, model.classes,
                        model.feature_dim, model.seed, model.provenance)
