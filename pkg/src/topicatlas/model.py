"""Data types for corpora and LDA posterior matrices, plus disk ingestion.

File formats are deliberately plain: JSONL for documents, one term per line
for vocabularies, TSV triplets for the sparse matrices. Everything is
validated at load time so downstream stages can assume well-formed inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np
from scipy import sparse

# Loader tolerance: real LDA dumps carry rounding error in the last digits.
ROW_SUM_TOL = 1e-4
# Entries below this are dropped from beta at ingest (rows renormalized after).
SPARSE_DROP = 1e-9


class ValidationError(ValueError):
    """An input file or matrix violates the documented contract."""


@dataclass
class Document:
    id: str
    text: str
    facets: dict[str, str] = field(default_factory=dict)
    tokens: list[str] | None = None  # filled during text analysis


@dataclass
class Corpus:
    documents: list[Document]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ValidationError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        self._by_id = {d.id: d for d in self.documents}

    @property
    def size(self) -> int:
        return len(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __getitem__(self, i: int) -> Document:
        return self.documents[i]

    def by_id(self, doc_id: str) -> Document:
        return self._by_id[doc_id]


@dataclass
class Vocabulary:
    """Ordered term list; position in the list is the word id."""

    terms: list[str]

    def __post_init__(self) -> None:
        self.index: dict[str, int] = {}
        for wid, term in enumerate(self.terms):
            if term in self.index:
                raise ValidationError(f"duplicate vocabulary term {term!r}")
            self.index[term] = wid

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def id_of(self, term: str) -> int | None:
        return self.index.get(term)

    def term_of(self, wid: int) -> str:
        return self.terms[wid]


@dataclass
class TopicModel:
    """Posterior matrices of a fitted topic model.

    theta is dense N x K (document-topic proportions), beta is CSR K x |W|
    (topic-word probabilities). Both are row-stochastic. Instances are
    treated as immutable after construction and are safe to share across
    worker processes.
    """

    theta: np.ndarray
    beta: sparse.csr_matrix
    vocabulary: Vocabulary

    def __post_init__(self) -> None:
        theta, beta = self.theta, self.beta
        if theta.ndim != 2:
            raise ValidationError("theta must be a 2-d matrix")
        if theta.shape[1] != beta.shape[0]:
            raise ValidationError(
                f"theta has {theta.shape[1]} topics but beta has {beta.shape[0]}"
            )
        if beta.shape[1] != len(self.vocabulary):
            raise ValidationError(
                f"beta has {beta.shape[1]} columns but vocabulary has "
                f"{len(self.vocabulary)} terms"
            )
        if theta.size and theta.min() < 0:
            raise ValidationError("theta contains negative entries")
        if beta.nnz and beta.data.min() < 0:
            raise ValidationError("beta contains negative entries")
        _check_rows(theta.sum(axis=1), 1e-6, "theta")
        _check_rows(np.asarray(beta.sum(axis=1)).ravel(), 1e-6, "beta")

    @property
    def n_topics(self) -> int:
        return self.beta.shape[0]

    @property
    def n_documents(self) -> int:
        return self.theta.shape[0]


@dataclass
class TopicAssignment:
    """Hard clustering of documents obtained by argmax over theta rows."""

    cluster_of: np.ndarray  # doc index -> topic id
    doc_counts: np.ndarray  # topic id -> number of assigned documents

    def members(self, topic: int) -> np.ndarray:
        return np.flatnonzero(self.cluster_of == topic)


def _check_rows(sums: np.ndarray, tol: float, name: str) -> None:
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        raise ValidationError(
            f"{name} row {bad[0]} sums to {sums[bad[0]]!r}, not 1 within {tol}"
        )


def assign_clusters(model: TopicModel) -> TopicAssignment:
    """Assign each document to its dominant topic.

    numpy argmax returns the first occurrence of the maximum, which gives
    the documented tie-break toward the lowest topic index.
    """
    cluster_of = np.argmax(model.theta, axis=1)
    doc_counts = np.bincount(cluster_of, minlength=model.n_topics)
    return TopicAssignment(cluster_of=cluster_of, doc_counts=doc_counts)


def load_corpus(path: str | Path) -> Corpus:
    """Read a JSONL corpus: one {"id", "text", "facets"} object per line."""
    documents = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: line {lineno}: invalid JSON ({exc})") from None
            if not isinstance(obj, dict):
                raise ValidationError(f"{path}: line {lineno}: expected a JSON object")
            for key in ("id", "text"):
                if key not in obj:
                    raise ValidationError(f"{path}: line {lineno}: missing {key!r} field")
                if not isinstance(obj[key], str):
                    raise ValidationError(f"{path}: line {lineno}: {key!r} must be a string")
            facets = obj.get("facets", {})
            if not isinstance(facets, dict):
                raise ValidationError(f"{path}: line {lineno}: 'facets' must be an object")
            for fk, fv in facets.items():
                if not isinstance(fv, str):
                    raise ValidationError(
                        f"{path}: line {lineno}: facet {fk!r} must map to a string"
                    )
            documents.append(Document(id=obj["id"], text=obj["text"], facets=dict(facets)))
    return Corpus(documents=documents)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            fh.write(json.dumps(
                {"id": doc.id, "text": doc.text, "facets": doc.facets},
                ensure_ascii=False,
            ))
            fh.write("\n")


def load_vocabulary(path: str | Path) -> Vocabulary:
    """Read one term per line; the 0-based line number is the word id."""
    with open(path, encoding="utf-8") as fh:
        terms = fh.read().splitlines()
    for lineno, term in enumerate(terms, start=1):
        if not term:
            raise ValidationError(f"{path}: line {lineno}: empty vocabulary term")
    return Vocabulary(terms=terms)


def load_stopwords(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


def _read_triplets(path: str | Path) -> Iterator[tuple[int, int, int, float]]:
    """Yield (lineno, row, col, value) from a TSV triplet file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ValidationError(
                    f"{path}: line {lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            try:
                row, col, value = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ValidationError(f"{path}: line {lineno}: malformed triplet") from None
            if row < 0 or col < 0:
                raise ValidationError(f"{path}: line {lineno}: negative index")
            if value < 0:
                raise ValidationError(f"{path}: line {lineno}: negative probability")
            yield lineno, row, col, value


def load_topic_model(
    beta_path: str | Path,
    theta_path: str | Path,
    vocab_path: str | Path,
) -> TopicModel:
    """Assemble a TopicModel from triplet TSV dumps and a vocabulary file.

    Rows of beta and theta whose sums land within ROW_SUM_TOL of 1 are
    renormalized to sum exactly 1; anything further off is rejected, which
    catches most format confusions early. Beta entries below SPARSE_DROP
    are discarded before renormalization.
    """
    vocab = load_vocabulary(vocab_path)

    rows, cols, vals = [], [], []
    for lineno, topic, word, prob in _read_triplets(beta_path):
        if word >= len(vocab):
            raise ValidationError(
                f"{beta_path}: line {lineno}: word id {word} out of range "
                f"for vocabulary of size {len(vocab)}"
            )
        rows.append(topic)
        cols.append(word)
        vals.append(prob)
    if not rows:
        raise ValidationError(f"{beta_path}: no entries")
    n_topics = max(rows) + 1
    beta = sparse.coo_matrix(
        (vals, (rows, cols)), shape=(n_topics, len(vocab)), dtype=np.float64
    ).tocsr()
    beta.sum_duplicates()
    beta_sums = np.asarray(beta.sum(axis=1)).ravel()
    _check_rows(beta_sums, ROW_SUM_TOL, "beta")
    beta.data[beta.data < SPARSE_DROP] = 0.0
    beta.eliminate_zeros()
    beta_sums = np.asarray(beta.sum(axis=1)).ravel()
    _check_rows(beta_sums, ROW_SUM_TOL, "beta")  # dropping cannot starve a row
    beta = sparse.csr_matrix(beta.multiply(1.0 / beta_sums[:, None]))

    t_rows, t_cols, t_vals = [], [], []
    for lineno, doc, topic, prop in _read_triplets(theta_path):
        if topic >= n_topics:
            raise ValidationError(
                f"{theta_path}: line {lineno}: topic id {topic} out of range "
                f"for model with {n_topics} topics"
            )
        t_rows.append(doc)
        t_cols.append(topic)
        t_vals.append(prop)
    if not t_rows:
        raise ValidationError(f"{theta_path}: no entries")
    n_docs = max(t_rows) + 1
    theta = np.zeros((n_docs, n_topics), dtype=np.float64)
    np.add.at(theta, (t_rows, t_cols), t_vals)
    theta_sums = theta.sum(axis=1)
    _check_rows(theta_sums, ROW_SUM_TOL, "theta")
    theta /= theta_sums[:, None]

    return TopicModel(theta=theta, beta=beta, vocabulary=vocab)
