"""Reference computations that share no code with the package under test."""

import itertools
import math

import numpy as np


def brute_force_metrics(gold, pred, k):
    """Per-class and averaged scores by direct counting over the pairs."""
    n = len(gold)
    per_class = []
    sums = [0, 0, 0]
    for c in range(k):
        tp = sum(1 for g, p in zip(gold, pred) if g == c and p == c)
        fp = sum(1 for g, p in zip(gold, pred) if g != c and p == c)
        fn = sum(1 for g, p in zip(gold, pred) if g == c and p != c)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_class.append((prec, rec, f1, tp + fn))
        sums = [sums[0] + tp, sums[1] + fp, sums[2] + fn]
    acc = sum(1 for g, p in zip(gold, pred) if g == p) / n
    tp_all, fp_all, fn_all = sums
    micro_p = tp_all / (tp_all + fp_all) if tp_all + fp_all else 0.0
    micro_r = tp_all / (tp_all + fn_all) if tp_all + fn_all else 0.0
    micro_f1 = 2 * micro_p * micro_r / (micro_p + micro_r) if micro_p + micro_r else 0.0
    macro = tuple(sum(m[i] for m in per_class) / k for i in range(3))
    weighted = tuple(sum(m[i] * m[3] for m in per_class) / n for i in range(3))
    return {
        "accuracy": acc,
        "per_class": per_class,
        "micro": (micro_p, micro_r, micro_f1),
        "macro": macro,
        "weighted": weighted,
    }


def central_difference(f, x, h=1e-5):
    """Numerical gradient of scalar ``f`` at array ``x`` by central differences."""
    x = np.array(x, dtype=np.float64)
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        old = x[i]
        x[i] = old + h
        fp = f(x)
        x[i] = old - h
        fm = f(x)
        x[i] = old
        g[i] = (fp - fm) / (2 * h)
    return g


def relative_error(a, b):
    a, b = np.ravel(a), np.ravel(b)
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / denom)


def softmax_ce_loss(W, b, X, y, l2):
    """Mean cross-entropy of a softmax model, written out with plain loops."""
    total = 0.0
    for xi, yi in zip(X, y):
        z = [float(np.dot(W[c], xi) + b[c]) for c in range(W.shape[0])]
        m = max(z)
        lse = m + math.log(sum(math.exp(v - m) for v in z))
        total += lse - z[yi]
    return total / len(y) + 0.5 * l2 * float(np.sum(W ** 2))


def ovr_hinge_loss(W, b, X, y, l2):
    total = 0.0
    for c in range(W.shape[0]):
        s = [1.0 if yi == c else -1.0 for yi in y]
        h = sum(max(0.0, 1.0 - si * (float(np.dot(W[c], xi)) + b[c])) for xi, si in zip(X, s))
        total += h / len(y) + 0.5 * l2 * float(np.dot(W[c], W[c]))
    return total


def best_stump_accuracy(X, y):
    """Highest training accuracy of any depth-1 tree, by exhaustive search.

    Tries every feature, every threshold between observed values and every
    labeling of the two leaves.
    """
    X = np.asarray(X, dtype=float)
    classes = sorted(set(y))
    best = 0.0
    for f in range(X.shape[1]):
        vals = sorted(set(X[:, f]))
        thresholds = [(a + b) / 2 for a, b in zip(vals, vals[1:])]
        for t in thresholds:
            for lc, rc in itertools.product(classes, repeat=2):
                pred = [lc if row[f] <= t else rc for row in X]
                acc = sum(p == g for p, g in zip(pred, y)) / len(y)
                best = max(best, acc)
    # a single leaf is also a depth-<=1 tree
    for c in classes:
        best = max(best, sum(g == c for g in y) / len(y))
    return best
