"""
Logistic regression and linear SVM
==================================

Check the analytic gradients against finite differences, then train both
models on a separable toy problem and watch the loss go down.
"""

# %%
import numpy as np
import scipy.sparse as sp

from banglahate.models import Hyperparams, fit_linear, hinge_objective, predict, softmax_objective, train_logreg, train_svm

rng = np.random.default_rng(3)


def numeric_grad(f, W, h=1e-5):
    g = np.zeros_like(W)
    for idx in np.ndindex(*W.shape):
        step = np.zeros_like(W)
        step[idx] = h
        g[idx] = (f(W + step) - f(W - step)) / (2 * h)
    return g


# %%
# Relative gradient error on random small instances.
for objective in (softmax_objective, hinge_objective):
    worst = 0.0
    for _ in range(20):
        n, V, k = 10, 6, 4
        X = rng.normal(size=(n, V))
        y = rng.integers(0, k, size=n)
        W, b = rng.normal(size=(k, V)), rng.normal(size=k)
        _, gW, _ = objective(W, b, X, y, 1e-3)
        num = numeric_grad(lambda w: objective(w, b, X, y, 1e-3)[0], W)
        worst = max(worst, np.linalg.norm(gW - num) / np.linalg.norm(num))
    print(f"{objective.__name__}: worst relative error {worst:.2e}")

# %%
# Two classes that never share a feature.
X = sp.csr_matrix(np.array([[1, 0], [2, 0], [3, 0], [0, 1], [0, 2], [0, 3]], dtype=float))
y = np.array([0, 0, 0, 1, 1, 1])
for trainer in (train_logreg, train_svm):
    model = trainer(X, y, 2, Hyperparams())
    print(trainer.__name__, "training accuracy:", np.mean(predict(model, X) == y))

# %%
# Full-batch descent with a small step decreases the loss every epoch.
_, _, losses = fit_linear("logreg", X, y, 2, Hyperparams(learning_rate=0.01, epochs=20, batch_size=len(y)))
print(np.round(losses, 4))
print("monotone:", all(b <= a for a, b in zip(losses, losses[1:])))
