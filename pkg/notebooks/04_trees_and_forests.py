"""
Decision trees and random forests
=================================

XOR needs two levels of splits; a forest of one unbagged tree that sees all
features is the same model as a single tree.
"""

# %%
import itertools

import numpy as np

from banglahate.models import Hyperparams, gini, predict, train_forest, train_tree

X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
y = np.array([0, 0, 1, 1])

print("gini(2, 2) =", gini([2, 2]), " gini(4, 0) =", gini([4, 0]))

# %%
# No single threshold on one feature separates XOR.
best = 0.0
for f, t, (a, b) in itertools.product(range(2), [0.5], itertools.product(range(2), repeat=2)):
    pred = np.where(X[:, f] <= t, a, b)
    best = max(best, np.mean(pred == y))
print("best stump accuracy:", best)

tree = train_tree(X, y, 2, Hyperparams(tree_max_depth=None))
print("tree depth:", tree.payload.depth(), " accuracy:", np.mean(predict(tree, X) == y))

# %%
rng = np.random.default_rng(0)
Xr = rng.integers(0, 3, size=(60, 8)).astype(float)
yr = rng.integers(0, 3, size=60)
hp = Hyperparams(forest_n_trees=1, forest_bootstrap=False, forest_feature_fraction=1.0, tree_max_depth=None)
same = np.array_equal(predict(train_forest(Xr, yr, 3, hp), Xr), predict(train_tree(Xr, yr, 3, hp), Xr))
print("one-tree forest equals the tree:", same)

# %%
# A bagged forest with sqrt(V) features per split.
forest = train_forest(Xr, yr, 3, Hyperparams(forest_n_trees=50, tree_max_depth=None))
print("forest training accuracy:", np.mean(predict(forest, Xr) == yr))
