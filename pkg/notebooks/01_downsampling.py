"""
Downsampling labeled splits
===========================

Shrink each split to a third of its size, either uniformly or per class,
and check that the output sizes follow ``floor(n / 3)``.
"""

# %%
from fractions import Fraction

import numpy as np

from banglahate.corpus import DatasetSplit, Document, LabelSchema, class_distribution, downsample

schema = LabelSchema.default("1A")
rng = np.random.default_rng(0)

# %%
# Synthetic splits with the sizes of the original train / dev / test sets.
# Labels are skewed towards "None", as in hate-speech corpora.
probs = np.array([0.08, 0.03, 0.07, 0.05, 0.01, 0.76])
sizes = {"train": 35_522, "dev": 2_512, "test": 10_200}
splits = {}
for name, n in sizes.items():
    labels = rng.choice(schema.k, size=n, p=probs)
    docs = [Document(f"{name}{i}", "", int(c)) for i, c in enumerate(labels)]
    splits[name] = DatasetSplit(name, schema, docs)

for name, split in splits.items():
    small = downsample(split, Fraction(1, 3), seed=42)
    print(f"{name:5s} {len(split):6d} -> {len(small):6d}")

# %%
# Stratified sampling keeps every class proportion within 1/|output|.
train = splits["train"]
small = downsample(train, Fraction(1, 3), seed=42, stratified=True)
before, after = class_distribution(train), class_distribution(small)
for c in sorted(before):
    p, q = before[c][1], after[c][1]
    print(f"{schema.name(c):15s} {float(p):.4f} {float(q):.4f}  |diff| * m = {float(abs(p - q) * len(small)):.3f}")

# %%
# Plain uniform sampling hits the same size but lets proportions drift.
uniform = downsample(train, Fraction(1, 3), seed=42, stratified=False)
drift = max(abs(before[c][1] - class_distribution(uniform)[c][1]) for c in before)
print("largest proportion drift without stratification:", float(drift))
