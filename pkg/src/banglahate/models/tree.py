"""CART classification trees (Gini impurity) and bagged random forests."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
import scipy.sparse as sp

from ..errors import TrainError
from .base import FOREST, TREE, ForestModel, Hyperparams, TrainedModel, TreeModel, seed64

# relative slack under which two split scores count as tied
SCORE_RTOL = 1e-12


def gini(counts) -> float:
    """1 - sum p_c^2 for a vector of class counts (0 for an empty node)."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.dot(p, p))


def weighted_gini(left_counts, right_counts) -> float:
    nl, nr = float(np.sum(left_counts)), float(np.sum(right_counts))
    return (nl * gini(left_counts) + nr * gini(right_counts)) / (nl + nr)


def _as_csr(X) -> sp.csr_matrix:
    if hasattr(X, "csr"):
        return X.csr
    if sp.issparse(X):
        return sp.csr_matrix(X)
    return sp.csr_matrix(np.asarray(X, dtype=np.float64))


def _best_split_for_feature(vals: np.ndarray, y: np.ndarray, k: int, min_leaf: int):
    """Best (score, threshold) over midpoints of distinct values, or None.

    ``score`` is sum L_c^2/n_L + sum R_c^2/n_R, which is larger exactly when
    the weighted Gini impurity is smaller.
    """
    order = np.argsort(vals, kind="stable")
    v = vals[order]
    m = v.size
    cuts = np.flatnonzero(v[:-1] < v[1:])  # left side = sorted[: i + 1]
    if cuts.size == 0:
        return None
    n_left = cuts + 1
    ok = (n_left >= min_leaf) & (m - n_left >= min_leaf)
    if not ok.any():
        return None
    cuts, n_left = cuts[ok], n_left[ok]
    onehot = np.zeros((m, k))
    onehot[np.arange(m), y[order]] = 1.0
    cum = np.cumsum(onehot, axis=0)
    left = cum[cuts]
    right = cum[-1] - left
    n_right = m - n_left
    score = (left * left).sum(axis=1) / n_left + (right * right).sum(axis=1) / n_right
    best = score.max()
    i = int(np.flatnonzero(score >= best - SCORE_RTOL * max(1.0, abs(best)))[0])
    thr = (v[cuts[i]] + v[cuts[i] + 1]) / 2.0
    return float(score[i]), float(thr)


def _nonconstant_features(Xn: sp.csc_matrix) -> np.ndarray:
    m = Xn.shape[0]
    nnz = np.diff(Xn.indptr)
    out = []
    for f in np.flatnonzero(nnz > 0):
        if nnz[f] < m:
            out.append(f)
            continue
        data = Xn.data[Xn.indptr[f] : Xn.indptr[f + 1]]
        if np.any(data != data[0]):
            out.append(f)
    return np.asarray(out, dtype=np.int64)


def _n_sampled_features(V: int, fraction) -> int:
    if fraction == "sqrt":
        return max(1, int(math.isqrt(V)))
    return max(1, int(math.floor(fraction * V)))


def build_tree(
    X,
    y,
    k: int,
    max_depth: Optional[int] = None,
    min_samples_leaf: int = 1,
    rows=None,
    rng: Optional[np.random.Generator] = None,
    max_features: Optional[int] = None,
) -> TreeModel:
    """Grow a CART tree greedily.

    Each internal node takes the (feature, threshold) pair with the lowest
    weighted Gini impurity, lowest feature index and then lowest threshold on
    ties. Zero-gain splits are allowed, so XOR-like data can still be split.
    With ``rng`` and ``max_features`` set, each node only considers a random
    subset of the features that are non-constant at that node.
    """
    Xr = _as_csr(X)
    y = np.asarray(y, dtype=np.int64)
    if Xr.shape[0] == 0 or y.size != Xr.shape[0]:
        raise TrainError("cannot grow a tree on empty or misaligned data")
    if rows is None:
        rows = np.arange(Xr.shape[0])
    V = Xr.shape[1]

    feature, threshold, left, right, value = [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, np.asarray(rows, dtype=np.int64), 0)]
    while stack:
        node, node_rows, depth = stack.pop()
        yn = y[node_rows]
        counts = np.bincount(yn, minlength=k)
        value[node] = int(np.argmax(counts))
        m = node_rows.size
        if (
            np.count_nonzero(counts) <= 1
            or (max_depth is not None and depth >= max_depth)
            or m < 2 * min_samples_leaf
        ):
            continue
        Xn = Xr[node_rows].tocsc()
        Xn.sort_indices()
        candidates = _nonconstant_features(Xn)
        if rng is not None and max_features is not None and candidates.size > max_features:
            perm = rng.permutation(V)
            mask = np.zeros(V, dtype=bool)
            mask[candidates] = True
            candidates = np.sort(perm[mask[perm]][:max_features])
        best = None
        for f in candidates:
            lo, hi = Xn.indptr[f], Xn.indptr[f + 1]
            vals = np.zeros(m)
            vals[Xn.indices[lo:hi]] = Xn.data[lo:hi]
            found = _best_split_for_feature(vals, yn, k, min_samples_leaf)
            if found is None:
                continue
            score, thr = found
            if best is None or score > best[0] + SCORE_RTOL * max(1.0, abs(best[0])):
                best = (score, int(f), thr, vals)
        if best is None:
            continue
        _, f, thr, vals = best
        go_left = vals <= thr
        lnode, rnode = new_node(), new_node()
        feature[node], threshold[node] = f, thr
        left[node], right[node] = lnode, rnode
        stack.append((rnode, node_rows[~go_left], depth + 1))
        stack.append((lnode, node_rows[go_left], depth + 1))

    return TreeModel(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=np.int64),
        root,
    )


def train_tree(X, y, k: int, hp: Hyperparams = Hyperparams()) -> TrainedModel:
    Xr = _as_csr(X)
    tree = build_tree(Xr, y, k, hp.tree_max_depth, hp.tree_min_samples_leaf)
    return TrainedModel(TREE, k, tree, feature_dim=Xr.shape[1], seed=seed64(hp.seed),
                        provenance={"hyperparams": hp.to_dict()})


def tree_seed(seed: int, index: int) -> list:
    return [seed64(seed), index]


def train_forest(X, y, k: int, hp: Hyperparams = Hyperparams()) -> TrainedModel:
    """Bagged CART trees with per-split feature sampling.

    Tree ``t`` draws its bootstrap sample and feature subsets from a
    generator seeded by ``(hp.seed, t)``, so trees are independent of
    training order.
    """
    Xr = _as_csr(X)
    y = np.asarray(y, dtype=np.int64)
    n, V = Xr.shape
    if n == 0 or y.size != n:
        raise TrainError("cannot grow a forest on empty or misaligned data")
    n_feat = _n_sampled_features(V, hp.forest_feature_fraction) if V else 1
    trees, seeds = [], []
    for t in range(hp.forest_n_trees):
        seeds.append(tuple(tree_seed(hp.seed, t)))
        rng = np.random.default_rng(tree_seed(hp.seed, t))
        rows = rng.integers(0, n, size=n) if hp.forest_bootstrap else np.arange(n)
        trees.append(
            build_tree(Xr, y, k, hp.tree_max_depth, hp.tree_min_samples_leaf,
                       rows=rows, rng=rng, max_features=n_feat)
        )
    forest = ForestModel(tuple(trees), tuple(seeds), seed64(hp.seed))
    return TrainedModel(FOREST, k, forest, feature_dim=V, seed=seed64(hp.seed),
                        provenance={"hyperparams": hp.to_dict()})
