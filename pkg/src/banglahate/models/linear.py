"""Multinomial logistic regression and one-vs-rest linear SVM.

Both are trained by plain mini-batch (sub)gradient descent from zero weights
with a fixed learning rate. Only the weights are L2-regularized, not the bias.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError
from .base import LOGREG, SVM, Hyperparams, LinearModel, TrainedModel, seed64


def _as_matrix(X):
    return X.csr if hasattr(X, "csr") else X


def softmax(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


def one_hot(y, k: int) -> np.ndarray:
    y = np.asarray(y, dtype=np.int64)
    Y = np.zeros((y.size, k))
    Y[np.arange(y.size), y] = 1.0
    return Y


def ovr_signs(y, k: int) -> np.ndarray:
    """+1 where the row belongs to the column's class, -1 elsewhere."""
    return 2.0 * one_hot(y, k) - 1.0


def _weight_grad(G: np.ndarray, X) -> np.ndarray:
    # (G^T X) computed as (X^T G)^T so a sparse X stays on the left
    return np.asarray((X.T @ G).T)


def softmax_objective(W, b, X, y, l2: float = 0.0):
    """Mean softmax cross-entropy + (l2/2)||W||^2, with its gradient.

    Returns ``(loss, grad_W, grad_b)``.
    """
    X = _as_matrix(X)
    n = X.shape[0]
    k = W.shape[0]
    Z = np.asarray(X @ W.T) + b
    Zs = Z - Z.max(axis=1, keepdims=True)
    logsumexp = np.log(np.exp(Zs).sum(axis=1))
    y = np.asarray(y, dtype=np.int64)
    loss = float(np.mean(logsumexp - Zs[np.arange(n), y])) + 0.5 * l2 * float(np.sum(W * W))
    G = (softmax(Z) - one_hot(y, k)) / n
    return loss, _weight_grad(G, X) + l2 * W, G.sum(axis=0)


def hinge_objective(W, b, X, y, l2: float = 0.0):
    """Sum over classes of one-vs-rest mean hinge loss + (l2/2)||w_c||^2.

    The subgradient uses 0 for the hinge term at margin exactly 1.
    Returns ``(loss, grad_W, grad_b)``.
    """
    X = _as_matrix(X)
    n = X.shape[0]
    k = W.shape[0]
    S = ovr_signs(y, k)
    margins = S * (np.asarray(X @ W.T) + b)
    loss = float(np.sum(np.maximum(0.0, 1.0 - margins)) / n) + 0.5 * l2 * float(np.sum(W * W))
    G = -(S * (margins < 1.0)) / n
    return loss, _weight_grad(G, X) + l2 * W, G.sum(axis=0)


OBJECTIVES = {LOGREG: softmax_objective, SVM: hinge_objective}


def fit_linear(kind: str, X, y, k: int, hp: Hyperparams = Hyperparams()):
    """Run mini-batch descent and return ``(W, b, losses)``.

    ``losses[e]`` is the full-data objective after ``e`` epochs (so
    ``losses[0]`` is the value at zero weights). Each epoch visits the rows
    in a fresh permutation drawn from a generator seeded by ``hp.seed``.
    """
    objective = OBJECTIVES[kind]
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.int64)
    n, V = X.shape
    if n == 0 or y.size != n:
        raise ValueError(f"need matching non-empty X and y, got {n} rows and {y.size} labels")
    if y.min() < 0 or y.max() >= k:
        raise ValueError("labels out of range for k classes")
    W = np.zeros((k, V))
    b = np.zeros(k)
    rng = np.random.default_rng(seed64(hp.seed))
    losses = [objective(W, b, X, y, hp.l2_reg)[0]]
    for epoch in range(1, hp.epochs + 1):
        order = rng.permutation(n)
        # divergence is reported below as NumericError, not as numpy warnings
        with np.errstate(over="ignore", invalid="ignore"):
            for start in range(0, n, hp.batch_size):
                idx = order[start : start + hp.batch_size]
                _, gW, gb = objective(W, b, X[idx], y[idx], hp.l2_reg)
                W -= hp.learning_rate * gW
                b -= hp.learning_rate * gb
            loss = objective(W, b, X, y, hp.l2_reg)[0]
        if not np.isfinite(loss) or not np.all(np.isfinite(W)):
            raise NumericError(f"non-finite {kind} loss at epoch {epoch}", epoch=epoch)
        losses.append(loss)
    return W, b, losses


def _train(kind, X, y, k, hp):
    W, b, losses = fit_linear(kind, X, y, k, hp)
    model = TrainedModel(kind, k, LinearModel(kind, W, b), feature_dim=W.shape[1], seed=seed64(hp.seed),
                         provenance={"hyperparams": hp.to_dict()})
    return model, losses


def train_logreg(X, y, k: int, hp: Hyperparams = Hyperparams()) -> TrainedModel:
    return _train(LOGREG, X, y, k, hp)[0]


def train_svm(X, y, k: int, hp: Hyperparams = Hyperparams()) -> TrainedModel:
    return _train(SVM, X, y, k, hp)[0]


def predict_proba(model: TrainedModel, X) -> np.ndarray:
    """Class probabilities of a logistic-regression model."""
    if model.kind != LOGREG:
        raise ValueError("probabilities are only defined for logreg models")
    return softmax(model.payload.decision_function(_as_matrix(X)))
