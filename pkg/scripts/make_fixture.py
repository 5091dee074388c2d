"""Regenerate the bundled synthetic fixture corpus.

The real annotated corpus is not bundled, so end-to-end tests run
on a small Bangla-like corpus built from per-class keyword pools, filler
words, stopwords and noise (URLs, emoji, punctuation). Every document carries
both a hate-type (1A) and a hate-target (1B) label; the two label sets are
written as separate split files sharing ids and texts.

Run from the repository root:

    python scripts/make_fixture.py
"""

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from banglahate.corpus import LabelSchema  # noqa: E402
from banglahate.features import count_vectorize, fit_vocabulary  # noqa: E402
from banglahate.preprocess import CleanConfig, default_stopwords, preprocess_text  # noqa: E402

OUT = ROOT / "src" / "banglahate" / "data" / "fixture"
SEED = 2025

TYPE_WORDS = {
    "Abusive": ["বেয়াদব", "ফালতু", "বদমাশ", "অসভ্য", "বেহায়া", "নির্লজ্জ", "ছোটলোক", "গাধা"],
    "Sexism": ["মহিলা", "নারী", "বউ", "রান্নাঘর", "পর্দা", "মেয়েরা", "স্ত্রী", "ঘরে"],
    "Religious Hate": ["ধর্ম", "মন্দির", "মসজিদ", "কাফের", "নাস্তিক", "পূজা", "হুজুর", "ধর্মান্ধ"],
    "Political Hate": ["সরকার", "দল", "নেতা", "ভোট", "মন্ত্রী", "লীগ", "দালাল", "সংসদ"],
    "Profane": ["শালা", "হারামজাদা", "কুত্তা", "শুয়োর", "ধুর", "বেটা", "মাথামোটা", "চুপ"],
    "None": ["সুন্দর", "ভালো", "ধন্যবাদ", "খেলা", "গান", "ভিডিও", "শুভকামনা", "চমৎকার"],
}
TARGET_WORDS = {
    "None": [],
    "Society": ["সমাজ", "দেশ", "জাতি", "জনগণ", "নাগরিক"],
    "Organization": ["কোম্পানি", "পুলিশ", "মিডিয়া", "চ্যানেল", "প্রতিষ্ঠান"],
    "Community": ["হিন্দু", "মুসলিম", "বৌদ্ধ", "সম্প্রদায়", "গোষ্ঠী"],
    "Individual": ["ভাই", "আপা", "লোকটা", "মেয়েটা", "ছেলেটা"],
}
FILLER = ["আজকে", "দেখলাম", "কথা", "সবাই", "বলছে", "আসলে", "একদম", "এখানে", "এই", "আমি", "তুমি", "কিন্তু"]
NOISE = ["https://youtu.be/v{n}", "www.example.com/{n}", "😡", "😂", "👍🏽", "!!", "।", "?", "...", "#{n}"]

# 1A label -> count, per split
TRAIN_1A = {"None": 24, "Abusive": 8, "Sexism": 7, "Religious Hate": 7, "Political Hate": 8, "Profane": 6}
DEV_1A = {"None": 8, "Abusive": 3, "Sexism": 2, "Religious Hate": 3, "Political Hate": 2, "Profane": 2}
TEST_1A = {"None": 9, "Abusive": 3, "Sexism": 2, "Religious Hate": 2, "Political Hate": 2, "Profane": 2}
TARGET_PREF = {
    "Abusive": ["Individual", "Individual", "Society"],
    "Sexism": ["Individual", "Society", "Community"],
    "Religious Hate": ["Community", "Community", "Society"],
    "Political Hate": ["Organization", "Organization", "Society"],
    "Profane": ["Individual", "Organization", "Society"],
}


def make_text(rng, type_label, target_label, noisy_labels):
    words = rng.sample(TYPE_WORDS[type_label], rng.randint(2, 3))
    if target_label != "None":
        words += rng.sample(TARGET_WORDS[target_label], rng.randint(1, 2))
    words += rng.sample(FILLER, rng.randint(1, 3))
    if noisy_labels:
        # a confusable keyword from another class
        other = rng.choice([c for c in TYPE_WORDS if c != type_label])
        words.append(rng.choice(TYPE_WORDS[other]))
    rng.shuffle(words)
    for _ in range(rng.randint(0, 2)):
        pos = rng.randint(0, len(words))
        words.insert(pos, rng.choice(NOISE).format(n=rng.randint(1, 999)))
    return " ".join(words)


def build_split(rng, counts, prefix, noise_rate, seen_vectors=None):
    rows = []
    labels = [lab for lab, c in counts.items() for _ in range(c)]
    rng.shuffle(labels)
    stops = default_stopwords(CleanConfig())
    for i, type_label in enumerate(labels):
        target = "None" if type_label == "None" else rng.choice(TARGET_PREF[type_label])
        while True:
            text = make_text(rng, type_label, target, rng.random() < noise_rate)
            tokens = tuple(sorted(preprocess_text(text, CleanConfig(), stops)))
            if seen_vectors is None or tokens not in seen_vectors:
                break
        if seen_vectors is not None:
            seen_vectors.add(tokens)
        rows.append((f"{prefix}{i + 1:03d}", text, type_label, target))
    return rows


def write(rows, task, split):
    d = OUT / task
    d.mkdir(parents=True, exist_ok=True)
    col = 2 if task == "1A" else 3
    (d / f"{split}.tsv").write_text("".join(f"{r[0]}\t{r[1]}\t{r[col]}\n" for r in rows), encoding="utf-8")


CONFIG = """\
# Synthetic fixture experiment. Paths are relative to this file.
task = {task}
seed = 7
data.train = {task}/train.tsv
data.dev = {task}/dev.tsv
data.test = {task}/test.tsv
model.kind = logreg
hp.batch_size = 8
hp.tree_max_depth = none
hp.forest_n_trees = 25
downsample.fraction = 1
output.dir = runs
"""


def main():
    rng = random.Random(SEED)
    seen = set()
    train = build_split(rng, TRAIN_1A, "tr", 0.1, seen_vectors=seen)
    dev = build_split(rng, DEV_1A, "dv", 0.3)
    test = build_split(rng, TEST_1A, "ts", 0.3)
    for task in ("1A", "1B"):
        for name, rows in (("train", train), ("dev", dev), ("test", test)):
            write(rows, task, name)
        (OUT / f"fixture_{task}.cfg").write_text(CONFIG.format(task=task), encoding="utf-8")
        schema = LabelSchema.default(task)
        (OUT / f"schema_{task}.txt").write_text(schema.to_text(), encoding="utf-8")

    # sanity: unique training count vectors
    stops = default_stopwords(CleanConfig())
    toks = [preprocess_text(r[1], CleanConfig(), stops) for r in train]
    vocab = fit_vocabulary(toks)
    vecs = {tuple(count_vectorize(t, vocab).entries) for t in toks}
    assert len(vecs) == len(train), "duplicate training vectors"
    print(f"wrote fixture to {OUT}")


if __name__ == "__main__":
    main()
