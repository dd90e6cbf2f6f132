import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import sparse

from topicatlas.model import (
    Corpus,
    Document,
    TopicModel,
    ValidationError,
    Vocabulary,
    assign_clusters,
    load_corpus,
    load_stopwords,
    load_topic_model,
    load_vocabulary,
    save_corpus,
)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def make_model(theta_rows, beta_rows, terms):
    theta = np.asarray(theta_rows, dtype=float)
    beta = sparse.csr_matrix(np.asarray(beta_rows, dtype=float))
    return TopicModel(theta=theta, beta=beta, vocabulary=Vocabulary(list(terms)))


class TestLoadCorpus:
    def test_empty_file(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text("")
        assert load_corpus(p).size == 0

    def test_order_preserved(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_lines(p, [
            json.dumps({"id": "a", "text": "one"}),
            json.dumps({"id": "b", "text": "two", "facets": {"year": "1999"}}),
            json.dumps({"id": "c", "text": "three"}),
        ])
        corpus = load_corpus(p)
        assert corpus.size == 3
        assert [d.id for d in corpus] == ["a", "b", "c"]
        assert corpus.by_id("b").facets == {"year": "1999"}
        assert corpus[0].facets == {}

    def test_missing_text_names_line(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_lines(p, [
            json.dumps({"id": "a", "text": "one"}),
            json.dumps({"id": "b"}),
        ])
        with pytest.raises(ValidationError, match="line 2"):
            load_corpus(p)

    def test_bad_json_names_line(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_lines(p, ["{not json"])
        with pytest.raises(ValidationError, match="line 1"):
            load_corpus(p)

    def test_duplicate_id_rejected(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_lines(p, [
            json.dumps({"id": "a", "text": "one"}),
            json.dumps({"id": "a", "text": "two"}),
        ])
        with pytest.raises(ValidationError, match="duplicate"):
            load_corpus(p)

    def test_non_string_facet_rejected(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_lines(p, [json.dumps({"id": "a", "text": "x", "facets": {"year": 1999}})])
        with pytest.raises(ValidationError, match="facet"):
            load_corpus(p)

    @given(st.lists(
        st.tuples(
            st.text(st.characters(blacklist_categories=("Cs",)), min_size=0, max_size=40),
            st.dictionaries(
                st.text(st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=8),
                st.text(st.characters(blacklist_categories=("Cs",)), max_size=8),
                max_size=3,
            ),
        ),
        max_size=8,
    ))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, tmp_path_factory, rows):
        docs = [Document(id=f"d{i}", text=t, facets=f) for i, (t, f) in enumerate(rows)]
        corpus = Corpus(documents=docs)
        p = tmp_path_factory.mktemp("rt") / "c.jsonl"
        save_corpus(corpus, p)
        back = load_corpus(p)
        assert [d.id for d in back] == [d.id for d in corpus]
        assert [d.text for d in back] == [d.text for d in corpus]
        assert [d.facets for d in back] == [d.facets for d in corpus]


class TestVocabulary:
    def test_line_number_is_word_id(self, tmp_path):
        p = tmp_path / "v.txt"
        write_lines(p, ["alpha", "beta", "gamma"])
        vocab = load_vocabulary(p)
        assert len(vocab) == 3
        assert vocab.id_of("beta") == 1
        assert vocab.term_of(2) == "gamma"
        assert "delta" not in vocab

    def test_duplicate_term_rejected(self, tmp_path):
        p = tmp_path / "v.txt"
        write_lines(p, ["alpha", "alpha"])
        with pytest.raises(ValidationError, match="duplicate"):
            load_vocabulary(p)

    def test_empty_line_rejected(self, tmp_path):
        p = tmp_path / "v.txt"
        write_lines(p, ["alpha", "", "gamma"])
        with pytest.raises(ValidationError, match="line 2"):
            load_vocabulary(p)


def test_load_stopwords(tmp_path):
    p = tmp_path / "s.txt"
    write_lines(p, ["The", "of", "", "  and "])
    assert load_stopwords(p) == frozenset({"the", "of", "and"})


class TestLoadTopicModel:
    def write_model(self, tmp_path, beta_lines, theta_lines, terms):
        b, t, v = tmp_path / "beta.tsv", tmp_path / "theta.tsv", tmp_path / "vocab.txt"
        write_lines(b, beta_lines)
        write_lines(t, theta_lines)
        write_lines(v, terms)
        return b, t, v

    def test_singleton(self, tmp_path):
        b, t, v = self.write_model(tmp_path, ["0\t0\t1.0"], ["0\t0\t1.0"], ["word"])
        model = load_topic_model(b, t, v)
        assert model.n_topics == 1
        assert model.n_documents == 1
        assert model.beta[0, 0] == 1.0

    def test_row_sum_violation_rejected(self, tmp_path):
        b, t, v = self.write_model(
            tmp_path, ["0\t0\t0.5", "0\t1\t0.4"], ["0\t0\t1.0"], ["a", "b"]
        )
        with pytest.raises(ValidationError, match="beta row 0"):
            load_topic_model(b, t, v)

    def test_near_one_row_renormalized(self, tmp_path):
        b, t, v = self.write_model(
            tmp_path, ["0\t0\t0.50005", "0\t1\t0.5"], ["0\t0\t1.0"], ["a", "b"]
        )
        model = load_topic_model(b, t, v)
        row = model.beta.getrow(0).toarray().ravel()
        # direct addition, not matrix machinery
        assert abs((row[0] + row[1]) - 1.0) < 1e-12

    def test_word_id_out_of_range(self, tmp_path):
        b, t, v = self.write_model(tmp_path, ["0\t5\t1.0"], ["0\t0\t1.0"], ["a"])
        with pytest.raises(ValidationError, match="out of range"):
            load_topic_model(b, t, v)

    def test_topic_id_out_of_range_in_theta(self, tmp_path):
        b, t, v = self.write_model(tmp_path, ["0\t0\t1.0"], ["0\t3\t1.0"], ["a"])
        with pytest.raises(ValidationError, match="out of range"):
            load_topic_model(b, t, v)

    def test_negative_probability_rejected(self, tmp_path):
        b, t, v = self.write_model(
            tmp_path, ["0\t0\t1.2", "0\t1\t-0.2"], ["0\t0\t1.0"], ["a", "b"]
        )
        with pytest.raises(ValidationError, match="negative"):
            load_topic_model(b, t, v)

    def test_malformed_triplet_names_line(self, tmp_path):
        b, t, v = self.write_model(tmp_path, ["0\t0\t1.0", "0\t0"], ["0\t0\t1.0"], ["a"])
        with pytest.raises(ValidationError, match="line 2"):
            load_topic_model(b, t, v)

    def test_tiny_entries_dropped_then_renormalized(self, tmp_path):
        b, t, v = self.write_model(
            tmp_path,
            ["0\t0\t0.9999999999", "0\t1\t1e-10"],
            ["0\t0\t1.0"],
            ["a", "b"],
        )
        model = load_topic_model(b, t, v)
        assert model.beta.nnz == 1
        assert model.beta[0, 0] == 1.0

    def test_omitted_theta_entries_are_zero(self, tmp_path):
        b, t, v = self.write_model(
            tmp_path,
            ["0\t0\t1.0", "1\t1\t1.0"],
            ["0\t0\t0.6", "0\t1\t0.4", "1\t1\t1.0"],
            ["a", "b"],
        )
        model = load_topic_model(b, t, v)
        assert model.theta[1, 0] == 0.0
        np.testing.assert_allclose(model.theta[0], [0.6, 0.4], atol=1e-15)


class TestAssignClusters:
    def test_unique_argmax(self):
        m = make_model([[0.1, 0.7, 0.2]], np.eye(3), ["a", "b", "c"])
        assert assign_clusters(m).cluster_of.tolist() == [1]

    def test_tie_breaks_low(self):
        m = make_model([[0.5, 0.5]], np.eye(2), ["a", "b"])
        assert assign_clusters(m).cluster_of.tolist() == [0]

    def test_counts(self):
        theta = [[0.1, 0.1, 0.8]] * 3
        m = make_model(theta, np.eye(3), ["a", "b", "c"])
        assignment = assign_clusters(m)
        assert assignment.doc_counts.tolist() == [0, 0, 3]
        assert assignment.members(2).tolist() == [0, 1, 2]

    @given(st.lists(
        st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4),
        min_size=1, max_size=20,
    ))
    @settings(max_examples=60, deadline=None)
    def test_argmax_property(self, raw):
        theta = np.asarray(raw)
        theta /= theta.sum(axis=1, keepdims=True)
        m = make_model(theta, np.eye(4), ["a", "b", "c", "d"])
        assignment = assign_clusters(m)
        assert int(assignment.doc_counts.sum()) == len(raw)
        for i, row in enumerate(theta):
            chosen = assignment.cluster_of[i]
            assert all(row[chosen] >= row[t] for t in range(4))


def test_model_shape_mismatch_rejected():
    with pytest.raises(ValidationError, match="topics"):
        make_model([[1.0]], np.eye(2), ["a", "b"])
