"""
From raw comments to sparse vectors
===================================

Clean, tokenize and filter a few Bangla comments, then turn them into count
and TF-IDF vectors.
"""

# %%
import numpy as np

from banglahate.features import FeatureSpec, Featurizer, fit_vocabulary
from banglahate.preprocess import CleanConfig, clean, default_stopwords, preprocess_text

comments = [
    "আমি আজকে খেলা দেখলাম!! দারুণ 😂 https://youtu.be/x1",
    "এই নেতা একদম দালাল। সরকার কিছু করে না...",
    "WWW.example.com দেখুন, ভিডিওটা ভালো 👍🏽",
]

# %%
# Cleaning removes URLs first, then emoji, punctuation (including the danda)
# and symbols. Latin letters are lowercased.
config = CleanConfig()
for text in comments:
    print(repr(clean(text, config)))

# %%
# Tokens after whitespace splitting and stopword removal.
stops = default_stopwords(config)
print(f"{len(stops)} stopwords from {stops.source_id}")
tokens = [preprocess_text(text, config, stops) for text in comments]
for toks in tokens:
    print(toks)

# %%
# Vocabulary columns follow lexicographic term order.
vocab = fit_vocabulary(tokens, ngram_range=(1, 2))
print(len(vocab), "terms")
print(vocab.to_text().splitlines()[0])

# %%
# Count vectors for the tree and linear models, TF-IDF rows for the SVM.
counts = Featurizer.fit(FeatureSpec("count"), tokens).transform(tokens)
tfidf = Featurizer.fit(FeatureSpec("tfidf", (1, 2)), tokens).transform(tokens)
print("count row sums:", counts.to_dense().sum(axis=1))
print("tf-idf row norms:", np.linalg.norm(tfidf.to_dense(), axis=1))
