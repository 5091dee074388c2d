"""
Metrics and the trivial baselines
=================================

Micro-averaged scores collapse to accuracy for single-label data. The
majority and random baselines have closed-form expected scores.
"""

# %%
from fractions import Fraction

import numpy as np

from banglahate.corpus import LabelSchema
from banglahate.metrics import classwise_markdown, evaluate, fmt2
from banglahate.models import predict, train_majority, train_random

schema = LabelSchema.default("1A")
none = schema.index("None")

# %%
# Majority baseline: accuracy equals the prevalence p of the majority class,
# and weighted precision equals p squared.
gold = [none] * 57 + [0] * 12 + [1] * 8 + [2] * 9 + [3] * 8 + [4] * 6
model = train_majority(gold, schema.k)
report = evaluate(gold, predict(model, np.zeros((len(gold), 1))), schema)
print("accuracy", report.accuracy, " micro F1", report.micro_f1, " weighted P", report.weighted_p)
print("p^2 =", Fraction(57, 100) ** 2, "->", fmt2(report.weighted_p))
print(classwise_markdown(report))

# %%
# Random baseline: accuracy near 1/k however the gold labels are distributed.
for k, task in ((6, "1A"), (5, "1B")):
    gold = np.random.default_rng(k).integers(0, k, size=10_000)
    pred = predict(train_random(k, seed=1), np.zeros((10_000, 1)))
    acc = evaluate(gold, pred, LabelSchema.default(task)).accuracy
    print(f"k={k}: accuracy {float(acc):.4f} vs 1/k = {1 / k:.4f}")

# %%
# The micro/accuracy identity holds exactly on arbitrary predictions.
rng = np.random.default_rng(5)
gold, pred = rng.integers(0, 6, size=300), rng.integers(0, 6, size=300)
r = evaluate(gold, pred, schema)
print(r.micro_p == r.micro_r == r.micro_f1 == r.accuracy, r.weighted_r == r.accuracy)
