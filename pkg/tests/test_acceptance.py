"""End-to-end acceptance checks, one test per criterion.

Each test carries an ``acceptance`` marker; the terminal summary prints one
PASS/FAIL line per criterion. Time budgets are asserted alongside results.
"""

import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp

from banglahate.corpus import DatasetSplit, Document, LabelSchema, downsample, save_split
from banglahate.features import FeatureSpec, Featurizer
from banglahate.harness.cli import main
from banglahate.harness.config import load_config
from banglahate.harness.experiment import RECORD_FILE, load_record, run_experiment
from banglahate.metrics import EvalReport, evaluate, fmt2
from banglahate.models import (
    Hyperparams,
    hinge_objective,
    predict,
    softmax_objective,
    train_forest,
    train_logreg,
    train_majority,
    train_random,
    train_svm,
    train_tree,
)

from oracles import best_stump_accuracy, brute_force_metrics, central_difference, ovr_hinge_loss, relative_error, softmax_ce_loss

GOLDEN = Path(__file__).parent / "golden"
MODEL_ORDER = ("majority", "random", "svm", "logreg", "forest", "tree")


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def synthetic_split(n, k, seed=0):
    schema = LabelSchema("t", tuple(f"c{i}" for i in range(k)))
    labels = np.random.default_rng(seed).integers(0, k, size=n)
    docs = [Document(f"d{i}", "x", int(c)) for i, c in enumerate(labels)]
    return DatasetSplit("train", schema, docs)


@pytest.mark.acceptance(1, "Downsampling arithmetic")
def test_downsampling_arithmetic():
    with Timer() as t:
        for n, expected in ((35_522, 11_840), (2_512, 837), (10_200, 3_400)):
            split = synthetic_split(n, 6)
            for stratified in (True, False):
                assert len(downsample(split, Fraction(1, 3), seed=0, stratified=stratified)) == expected
    assert t.seconds < 1


@pytest.mark.acceptance(2, "Random-baseline identity")
def test_random_baseline_identity():
    with Timer() as t:
        for k in (6, 5):
            rng = np.random.default_rng(k)
            # skewed gold labels; uniform guessing still hits 1/k on average
            probs = np.r_[0.5, np.full(k - 1, 0.5 / (k - 1))]
            gold = rng.choice(k, size=10_000, p=probs)
            schema = LabelSchema.default("1A" if k == 6 else "1B")
            pred = predict(train_random(k, seed=2025), np.zeros((10_000, 1)))
            acc = float(evaluate(gold, pred, schema).accuracy)
            assert abs(acc - 1 / k) <= 0.02
    assert t.seconds < 1


@pytest.mark.acceptance(3, "Majority-baseline identities")
def test_majority_baseline_identities():
    with Timer() as t:
        schema = LabelSchema.default("1A")
        none = schema.index("None")
        model = train_majority([none] * 5 + [0, 1, 2, 3, 4], schema.k)
        gold = [none] * 57 + [0] * 12 + [1] * 8 + [2] * 9 + [3] * 8 + [4] * 6
        report = evaluate(gold, predict(model, np.zeros((len(gold), 1))), schema)
        p = Fraction(57, 100)
        assert report.accuracy == report.micro_f1 == p
        assert report.weighted_p == p * p == Fraction(3249, 10_000)
        # a 0.57 / 0.33 pair needs a prevalence in [0.5701, 0.575)
        gold = [none] * 1149 + [0] * 851
        report = evaluate(gold, predict(model, np.zeros((len(gold), 1))), schema)
        assert (fmt2(report.accuracy), fmt2(report.weighted_p)) == ("0.57", "0.33")
    assert t.seconds < 1


@pytest.mark.acceptance(4, "Metric oracle equivalence")
def test_metric_oracle_equivalence():
    rng = np.random.default_rng(4)
    with Timer() as t:
        for _ in range(1000):
            k = int(rng.integers(1, 7))
            n = int(rng.integers(1, 51))
            gold = rng.integers(0, k, size=n).tolist()
            pred = rng.integers(0, k, size=n).tolist()
            report = evaluate(gold, pred, LabelSchema("t", tuple(f"c{i}" for i in range(k))))
            ref = brute_force_metrics(gold, pred, k)
            got = [report.accuracy, *report.micro, *report.macro, *report.weighted]
            want = [ref["accuracy"], *ref["micro"], *ref["macro"], *ref["weighted"]]
            for m, (pp, rr, ff, s) in zip(report.per_class, ref["per_class"]):
                got += [m.precision, m.recall, m.f1, m.support]
                want += [pp, rr, ff, s]
            assert max(abs(float(a) - b) for a, b in zip(got, want)) <= 1e-12
    assert t.seconds < 10


@pytest.mark.acceptance(5, "Micro/weighted identities")
def test_micro_weighted_identities():
    rng = np.random.default_rng(5)
    with Timer() as t:
        for _ in range(1000):
            k = int(rng.integers(1, 7))
            n = int(rng.integers(1, 200))
            gold = rng.integers(0, k, size=n)
            # mix of accurate and noisy predictors
            pred = np.where(rng.random(n) < rng.random(), gold, rng.integers(0, k, size=n))
            r = evaluate(gold, pred, LabelSchema("t", tuple(f"c{i}" for i in range(k))))
            assert r.micro_p == r.micro_r == r.micro_f1 == r.accuracy
            assert r.weighted_r == r.accuracy
    assert t.seconds < 5


def separable_corpus():
    class0 = ["আম", "জাম", "কলা", "লিচু"]
    class1 = ["নদী", "পাহাড়", "মেঘ", "বৃষ্টি"]
    rng = np.random.default_rng(6)
    docs, labels = [], []
    for i in range(40):
        pool = class0 if i % 2 == 0 else class1
        docs.append([pool[j] for j in rng.integers(0, 4, size=int(rng.integers(1, 6)))])
        labels.append(i % 2)
    return docs, np.array(labels)


@pytest.mark.acceptance(6, "Optimization correctness")
def test_optimization_correctness():
    rng = np.random.default_rng(6)
    with Timer() as t:
        for _ in range(100):
            n, V, k = int(rng.integers(1, 21)), int(rng.integers(1, 11)), int(rng.integers(2, 6))
            X = rng.normal(size=(n, V))
            y = rng.integers(0, k, size=n)
            W = rng.normal(scale=0.5, size=(k, V))
            b = rng.normal(scale=0.5, size=k)
            for objective, oracle in ((softmax_objective, softmax_ce_loss), (hinge_objective, ovr_hinge_loss)):
                _, gW, gb = objective(W, b, sp.csr_matrix(X), y, 1e-3)
                assert relative_error(gW, central_difference(lambda w: oracle(w, b, X, y, 1e-3), W)) < 1e-6
                assert relative_error(gb, central_difference(lambda c: oracle(W, c, X, y, 1e-3), b)) < 1e-6

        docs, y = separable_corpus()
        for trainer, spec in ((train_logreg, FeatureSpec("count")), (train_svm, FeatureSpec("tfidf", (1, 2)))):
            X = Featurizer.fit(spec, docs).transform(docs)
            model = trainer(X, y, 2, Hyperparams())
            assert np.mean(predict(model, X) == y) >= 0.95
    assert t.seconds < 30


@pytest.mark.acceptance(7, "Tree/forest properties")
def test_tree_forest_properties(xor_data):
    with Timer() as t:
        rng = np.random.default_rng(7)
        X = np.unique(rng.integers(0, 4, size=(200, 6)), axis=0).astype(float)
        y = rng.integers(0, 5, size=X.shape[0])
        unlimited = Hyperparams(tree_max_depth=None)
        assert np.mean(predict(train_tree(sp.csr_matrix(X), y, 5, unlimited), X) == y) == 1.0

        Xx, yx = xor_data
        assert best_stump_accuracy(Xx, yx) < 1.0
        tree = train_tree(Xx, yx, 2, unlimited)
        assert tree.payload.depth() == 2
        assert np.mean(predict(tree, Xx) == yx) == 1.0

        hp = Hyperparams(forest_n_trees=1, forest_bootstrap=False, forest_feature_fraction=1.0, tree_max_depth=None)
        Xf = sp.csr_matrix(rng.integers(0, 3, size=(80, 10)).astype(float))
        yf = rng.integers(0, 4, size=80)
        probe = sp.csr_matrix(rng.integers(0, 3, size=(200, 10)).astype(float))
        assert np.array_equal(predict(train_forest(Xf, yf, 4, hp), probe), predict(train_tree(Xf, yf, 4, hp), probe))
    assert t.seconds < 10


@pytest.mark.acceptance(8, "Determinism")
def test_determinism(fixture_path, tmp_path):
    with Timer() as t:
        cfg = load_config(fixture_path / "fixture_1A.cfg").with_overrides(
            {"model.kind": "forest", "downsample.fraction": "2/3", "hp.forest_n_trees": "10"})
        a = run_experiment(cfg, tmp_path / "a")
        b = run_experiment(cfg, tmp_path / "b")
        assert a.digest == b.digest
        assert load_record(a.run_dir).digest == load_record(b.run_dir).digest
        for name in sorted(a.artifacts.values()):
            if name.startswith("report_") or name in ("model.npz", "vocab.tsv", "config.cfg"):
                assert (a.run_dir / name).read_bytes() == (b.run_dir / name).read_bytes(), name

        split = synthetic_split(5000, 6, seed=8)
        outs = []
        for i in range(2):
            path = tmp_path / f"down{i}.tsv"
            save_split(downsample(split, Fraction(1, 3), seed=99, stratified=True), path)
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
    assert t.seconds < 30


@pytest.mark.acceptance(9, "End-to-end fixture pipeline")
def test_fixture_pipeline(fixture_path, tmp_path, capsys):
    with Timer() as t:
        for task in ("1A", "1B"):
            cfg = str(fixture_path / f"fixture_{task}.cfg")
            out = tmp_path / task
            for kind in MODEL_ORDER:
                assert main(["--config", cfg, "--out", str(out), "run", "--set", f"model.kind={kind}"]) == 0
                assert (out / f"{task}-{kind}" / RECORD_FILE).is_file()
            capsys.readouterr()
            runs = [str(out / f"{task}-{kind}") for kind in MODEL_ORDER]
            table = tmp_path / f"comparison_{task}.md"
            assert main(["--out", str(table), "report", *runs]) == 0
            text = table.read_text(encoding="utf-8")
            lines = text.splitlines()
            assert lines[0] == "| Model | Accuracy | Precision | Recall | F1 | Micro-F1 | Macro-F1 |"
            assert [ln.split("|")[1].strip() for ln in lines[2:8]] == ["Majority", "Random", "SVM", "LR", "RF", "DT"]
            columns = list(zip(*(ln.split("|")[2:-1] for ln in lines[2:8])))
            assert all(any("**" in cell for cell in col) for col in columns)
            assert "| Model | Class | Precision | Recall | F1-score |" in lines
            assert table.read_bytes() == (GOLDEN / f"comparison_{task}.md").read_bytes()
    assert t.seconds < 60


@pytest.mark.acceptance(10, "External scoring boundary")
def test_external_scoring_boundary(tmp_path, capsys):
    with Timer() as t:
        schema = LabelSchema.default("1B")
        gold = tmp_path / "gold.tsv"
        gold.write_text(
            "c1\tক\tNone\nc2\tখ\tNone\nc3\tগ\tSociety\nc4\tঘ\tSociety\nc5\tঙ\tNone\nc6\tচ\tSociety\n",
            encoding="utf-8")
        pred = tmp_path / "pred.tsv"
        pred.write_text("c6\tSociety\nc5\tNone\nc4\tSociety\nc3\tNone\nc2\tSociety\nc1\tNone\n", encoding="utf-8")
        report_path = tmp_path / "report.json"
        assert main(["--task", "1B", "--out", str(report_path), "score", "--pred", str(pred), "--gold", str(gold)]) == 0
        report = EvalReport.from_json(report_path.read_text(encoding="utf-8"))
        assert report.accuracy == Fraction(2, 3)
        for name in ("None", "Society"):
            m = report.per_class[schema.index(name)]
            assert m.precision == m.recall == m.f1 == Fraction(2, 3)

        missing = tmp_path / "missing.tsv"
        missing.write_text("c1\tNone\nc2\tSociety\nc3\tNone\nc4\tSociety\nc5\tNone\n", encoding="utf-8")
        capsys.readouterr()
        assert main(["--task", "1B", "score", "--pred", str(missing), "--gold", str(gold)]) == 2
        assert "c6" in capsys.readouterr().err

        unknown = tmp_path / "unknown.tsv"
        unknown.write_text(pred.read_text(encoding="utf-8").replace("c3\tNone", "c3\tSexism"), encoding="utf-8")
        assert main(["--task", "1B", "score", "--pred", str(unknown), "--gold", str(gold)]) == 2
        err = capsys.readouterr().err
        assert "c3" in err and "Sexism" in err
    assert t.seconds < 1
