import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banglahate.features import (
    NGRAM_SEP,
    FeatureMatrix,
    FeatureSpec,
    Featurizer,
    SparseVector,
    TfidfWeights,
    Vocabulary,
    count_matrix,
    count_vectorize,
    fit_tfidf,
    fit_vocabulary,
    ngrams,
    tfidf_transform,
)

# frozen from direct evaluation of ln((1 + 2) / (1 + 1)) + 1
IDF_N2_DF1 = 1.4054651081081644

AB_BC = [["a", "b"], ["b", "c"]]

corpora = st.lists(st.lists(st.sampled_from(list("abcdef")), max_size=7), min_size=1, max_size=8)


def sv(dim, entries):
    return SparseVector(dim, [i for i, _ in entries], [v for _, v in entries])


class TestVocabulary:
    def test_hand_enumeration(self):
        vocab = fit_vocabulary(AB_BC)
        assert vocab.term_to_index == {"a": 0, "b": 1, "c": 2}
        assert vocab.doc_freq.tolist() == [1, 2, 1]
        assert vocab.n_docs == 2

    def test_min_df(self):
        assert fit_vocabulary(AB_BC, min_df=2).term_to_index == {"b": 0}

    def test_single_empty_document(self):
        vocab = fit_vocabulary([[]])
        assert len(vocab) == 0
        assert count_vectorize([], vocab).entries == []

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            fit_vocabulary([])

    def test_bigrams(self):
        vocab = fit_vocabulary([["x", "y", "z"]], ngram_range=(1, 2))
        assert sorted(vocab.term_to_index) == sorted(["x", "y", "z", "x" + NGRAM_SEP + "y", "y" + NGRAM_SEP + "z"])

    def test_ngram_helper(self):
        assert ngrams(["a", "b", "c"], (2, 3)) == ["a\x1fb", "b\x1fc", "a\x1fb\x1fc"]
        assert ngrams(["a"], (2, 2)) == []

    def test_max_features_tie_break(self):
        # df: a=3, b=2, c=2, d=2; keep 2 -> a plus the lexicographically first of b, c, d
        corpus = [["a", "b", "c", "d"], ["a", "b", "c", "d"], ["a"]]
        vocab = fit_vocabulary(corpus, max_features=2)
        assert vocab.term_to_index == {"a": 0, "b": 1}

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            fit_vocabulary(AB_BC, ngram_range=(2, 1))
        with pytest.raises(ValueError):
            fit_vocabulary(AB_BC, min_df=0)

    def test_text_round_trip(self, tmp_path):
        vocab = fit_vocabulary([["আমি", "ভাত"], ["ভাত", "খাই", "x"]], ngram_range=(1, 2), min_df=1, max_features=4)
        path = tmp_path / "vocab.tsv"
        vocab.save(path)
        again = Vocabulary.load(path)
        assert again == vocab
        assert again.term_to_index == vocab.term_to_index
        assert again.doc_freq.tolist() == vocab.doc_freq.tolist()
        assert (again.ngram_range, again.n_docs, again.min_df, again.max_features) == (
            vocab.ngram_range, vocab.n_docs, vocab.min_df, vocab.max_features)
        assert again.digest() == vocab.digest()

    @settings(max_examples=150, deadline=None)
    @given(corpus=corpora, min_df=st.integers(1, 3), max_features=st.one_of(st.none(), st.integers(1, 6)),
           hi=st.integers(1, 3))
    def test_invariants(self, corpus, min_df, max_features, hi):
        vocab = fit_vocabulary(corpus, (1, hi), min_df, max_features)
        assert sorted(vocab.term_to_index.values()) == list(range(len(vocab)))
        assert all(df >= min_df for df in vocab.doc_freq)
        if max_features is not None:
            assert len(vocab) <= max_features
        matrix = count_matrix(corpus, vocab).to_dense()
        assert matrix.shape == (len(corpus), len(vocab))
        assert all(((matrix[:, j] > 0).sum() >= min_df) for j in range(len(vocab)))
        shuffled = list(reversed(corpus))
        assert fit_vocabulary(shuffled, (1, hi), min_df, max_features) == vocab


class TestCountVectorize:
    def test_hand_count(self):
        vocab = fit_vocabulary([["a", "b"], ["b", "c"]])
        assert count_vectorize(["b", "a", "b"], vocab).entries == [(0, 1.0), (1, 2.0)]

    def test_empty_and_oov(self):
        vocab = fit_vocabulary(AB_BC)
        assert count_vectorize([], vocab).entries == []
        assert count_vectorize(["z", "q"], vocab).entries == []
        assert count_vectorize([], vocab).dim == 3

    @settings(max_examples=150, deadline=None)
    @given(corpus=corpora, probe=st.lists(st.sampled_from(list("abcdefgh")), max_size=10))
    def test_sum_is_in_vocabulary_count(self, corpus, probe):
        vocab = fit_vocabulary(corpus, (1, 2))
        vec = count_vectorize(probe, vocab)
        expected = sum(1 for g in ngrams(probe, (1, 2)) if g in vocab.term_to_index)
        assert sum(vec.values) == expected


class TestSparseTypes:
    def test_sparse_vector_validation(self):
        with pytest.raises(ValueError):
            sv(3, [(1, 1.0), (0, 1.0)])
        with pytest.raises(ValueError):
            sv(3, [(3, 1.0)])
        with pytest.raises(ValueError):
            sv(3, [(0, 0.0)])
        with pytest.raises(ValueError):
            sv(3, [(0, float("nan"))])

    def test_matrix_rows(self):
        rows = [sv(4, [(1, 2.0)]), sv(4, []), sv(4, [(0, 1.0), (3, -1.5)])]
        m = FeatureMatrix.from_rows(rows, ["x", "y", "z"])
        assert m.dim == 4 and len(m) == 3
        assert m.rows == rows
        assert m.subset([2, 0]).row_ids == ["z", "x"]
        with pytest.raises(ValueError):
            FeatureMatrix.from_rows([sv(4, []), sv(5, [])], ["a", "b"])
        with pytest.raises(ValueError):
            FeatureMatrix.from_rows(rows, ["x"])


class TestTfidf:
    def test_idf_values(self):
        vocab = fit_vocabulary(AB_BC)
        w = fit_tfidf(count_matrix(AB_BC, vocab), vocab, norm="none")
        assert w.idf[1] == 1.0
        assert w.idf[0] == pytest.approx(IDF_N2_DF1, abs=1e-15)
        assert math.isclose(w.idf[0], math.log(1.5) + 1)
        assert np.all(w.idf >= 1)

    def test_empty_vocabulary(self):
        vocab = fit_vocabulary([[]])
        assert fit_tfidf(count_matrix([[]], vocab), vocab).idf.size == 0

    def test_dimension_mismatch(self):
        vocab = fit_vocabulary(AB_BC)
        other = count_matrix([["a"]], fit_vocabulary([["a"]]))
        with pytest.raises(ValueError):
            fit_tfidf(other, vocab)
        with pytest.raises(ValueError):
            tfidf_transform(sv(2, [(0, 1.0)]), TfidfWeights(np.ones(3)))

    def test_hand_multiplication(self):
        out = tfidf_transform(sv(2, [(0, 1.0), (1, 2.0)]), TfidfWeights([1.0, IDF_N2_DF1], "none"))
        assert out.entries[0] == (0, 1.0)
        assert out.entries[1][1] == pytest.approx(2.8109302162163288, abs=1e-12)

    def test_zero_row(self):
        assert tfidf_transform(sv(3, []), TfidfWeights(np.ones(3))).entries == []

    @settings(max_examples=150, deadline=None)
    @given(corpus=corpora)
    def test_l2_rows_unit_norm(self, corpus):
        feats = Featurizer.fit(FeatureSpec("tfidf", (1, 2), max_features=None), corpus)
        m = feats.transform(corpus)
        for row in m.rows:
            if row.values.size:
                assert abs(np.linalg.norm(row.values) - 1.0) <= 1e-12

    def test_one_document_corpus(self):
        corpus = [["a", "b", "a"]]
        row = Featurizer.fit(FeatureSpec("tfidf"), corpus).transform(corpus).row(0)
        assert abs(np.linalg.norm(row.values) - 1.0) <= 1e-12


class TestFeaturizer:
    def test_rebuild_from_saved_vocabulary(self, tmp_path):
        corpus = [["a", "b", "b"], ["b", "c"], ["c", "d", "a"]]
        spec = FeatureSpec("tfidf", (1, 2), max_features=None)
        fitted = Featurizer.fit(spec, corpus)
        fitted.vocab.save(tmp_path / "v.tsv")
        rebuilt = Featurizer.fit_from_vocabulary(spec, Vocabulary.load(tmp_path / "v.tsv"))
        a = fitted.transform(corpus).to_dense()
        b = rebuilt.transform(corpus).to_dense()
        assert np.array_equal(a, b)

    def test_config_id(self):
        assert FeatureSpec().config_id() == "count:ngram=1,1:min_df=1:max_features=50000:norm=l2"
        with pytest.raises(ValueError):
            FeatureSpec(kind="hash")
