"""Synthetic corpora with labels known by construction.

Two generators. `planted_corpus` builds a small corpus where each topic's
documents open with a unique bigram repeated three times, so the correct
label per topic is unambiguous. `demo_bundle` builds a larger faceted
corpus whose first topic carries two competing phrases: the stronger one
lives only in year-1999 documents, so filtering to year 2000 flips the
topic's label to the runner-up. Both are deterministic given their
arguments and small enough to regenerate on every test run.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

from .model import Corpus, Document, TopicModel, Vocabulary, save_corpus
from .textprep import DEFAULT_STOPWORDS, tokenize

PLANTED_BIGRAMS = (
    "graph theory",
    "protein folding",
    "neural networks",
    "quantum computing",
    "climate modeling",
    "gene expression",
    "fluid dynamics",
    "object recognition",
    "social cognition",
    "modal vibration",
)

# identical in every document, so their phrase windows carry zero
# information gain about any document subset
_FILLER_SENTENCES = (
    "data tables summarize outcomes.",
    "methods sections describe procedures.",
    "figures illustrate reported trends.",
    "appendices list parameter values.",
    "reviewers noted minor concerns.",
    "authors thank funding agencies.",
)

DEMO_BIGRAMS = (
    "coral bleaching",
    "ocean currents",
    "seismic waves",
    "solar panels",
    "wind turbines",
    "soil nutrients",
    "forest canopy",
    "river deltas",
    "glacier retreat",
    "storm surges",
    "carbon capture",
    "species migration",
    "volcanic ash",
    "tidal energy",
    "plankton blooms",
    "drought cycles",
    "permafrost thaw",
    "wetland restoration",
    "aerosol particles",
    "monsoon rainfall",
)

DEMO_SECONDARY = "reef ecosystems"

DEMO_SYSTEMS = (
    "ReefWatch", "DriftTrack", "QuakeScan", "SunGrid", "WindFarm",
    "SoilProbe", "CanopyCam", "DeltaFlow", "IceTrack", "SurgeAlert",
    "CarbonTrap", "MigrateTag", "AshPlume", "TideGen", "BloomSat",
    "DryIndex", "MarshCare", "HazeScan", "RainGauge", "WaveBuoy",
)

# one shared sentence per block of five topics; gives beta a block
# structure so the similarity network has communities worth looking at
_GROUP_SENTENCES = (
    "marine habitat surveys.",
    "atmospheric pressure gauges.",
    "terrain elevation mapping.",
    "coastal erosion monitoring.",
)

_GROUP_SIZE = 5


@dataclass
class SynthBundle:
    corpus: Corpus
    model: TopicModel
    stopwords: frozenset[str]
    expected_labels: dict[int, str]


@dataclass
class DemoBundle(SynthBundle):
    """Adds the facet filter that flips topic 0's label."""

    flip_topic: int = 0
    flip_facet: tuple[str, str] = ("year", "2000")
    flip_label: str = DEMO_SECONDARY


def _vocabulary_of(corpus: Corpus) -> Vocabulary:
    terms: set[str] = set()
    for doc in corpus:
        terms.update(tok.normalized for tok in tokenize(doc.text))
    return Vocabulary(terms=sorted(terms))


def _normalize_rows(raw: np.ndarray) -> np.ndarray:
    return raw / raw.sum(axis=1, keepdims=True)


def planted_corpus(docs_per_topic: int = 50) -> SynthBundle:
    """Ten topics, one unmistakable bigram each.

    Every document opens with its topic's bigram three times, followed by
    the same six filler sentences. The bigram is therefore the only
    candidate whose presence separates the topic's documents from the
    rest, and the beta rows weight its two words far above everything
    else, so it wins both the gain ranking and the frequency re-sort.
    """
    if docs_per_topic < 1:
        raise ValueError("docs_per_topic must be positive")
    k = len(PLANTED_BIGRAMS)
    filler = " ".join(_FILLER_SENTENCES)
    docs = []
    for t, bigram in enumerate(PLANTED_BIGRAMS):
        lead = f"{bigram}. " * 3
        for j in range(docs_per_topic):
            docs.append(Document(id=f"doc-{t:02d}-{j:03d}", text=lead + filler))
    corpus = Corpus(documents=docs)
    vocab = _vocabulary_of(corpus)

    raw = np.ones((k, len(vocab)), dtype=np.float64)
    for t, bigram in enumerate(PLANTED_BIGRAMS):
        for word in bigram.split():
            raw[t, vocab.id_of(word)] = 8.0
    beta = sparse.csr_matrix(_normalize_rows(raw))

    theta = np.full((len(docs), k), 0.01, dtype=np.float64)
    for i, doc in enumerate(docs):
        theta[i, int(doc.id.split("-")[1])] = 0.91

    model = TopicModel(theta=theta, beta=beta, vocabulary=vocab)
    expected = dict(enumerate(PLANTED_BIGRAMS))
    return SynthBundle(
        corpus=corpus, model=model, stopwords=DEFAULT_STOPWORDS,
        expected_labels=expected,
    )


def _demo_text(topic: int, j: int, year: int) -> str:
    parts = []
    if topic == 0:
        if year == 1999:
            parts.append(f"{DEMO_BIGRAMS[0]}. " * 3)
        parts.append(f"{DEMO_SECONDARY}. ")
    else:
        parts.append(f"{DEMO_BIGRAMS[topic]}. " * 3)
        # the runner-up phrase also shows up outside topic 0, but only in
        # year-1999 documents, so the year-2000 filter strands it there
        if topic <= 8 and year == 1999:
            parts.append(f"{DEMO_SECONDARY}. ")
    parts.append(_GROUP_SENTENCES[topic // _GROUP_SIZE] + " ")
    if j % 2 == 0:
        parts.append(f"the {DEMO_SYSTEMS[topic]} platform records observations. ")
    parts.append(" ".join(_FILLER_SENTENCES))
    return "".join(parts)


def demo_bundle(seed: int = 7, docs_per_topic: int = 25) -> DemoBundle:
    """Twenty faceted topics, ~500 documents, one label flip by design.

    Topic 0's documents all mention the runner-up phrase once; thirteen of
    them (the year-1999 ones) additionally open with the primary phrase
    three times. The runner-up is also injected into year-1999 documents
    of topics 1 through 8, which dilutes its gain below the primary's on
    the full corpus. Filtering to year 2000 removes every document that
    contains the primary and every diluting occurrence of the runner-up,
    which then separates the remaining topic-0 documents perfectly.
    """
    if docs_per_topic < 4:
        raise ValueError("docs_per_topic must be at least 4")
    k = len(DEMO_BIGRAMS)
    split = (docs_per_topic + 1) // 2  # first `split` docs of each topic are 1999
    docs = []
    for t in range(k):
        for j in range(docs_per_topic):
            year = 1999 if j < split else 2000
            docs.append(Document(
                id=f"doc-{t:02d}-{j:03d}",
                text=_demo_text(t, j, year),
                facets={"year": str(year)},
            ))
    corpus = Corpus(documents=docs)
    vocab = _vocabulary_of(corpus)
    rng = np.random.default_rng(seed)

    raw = np.ones((k, len(vocab)), dtype=np.float64)
    for t in range(k):
        for word in DEMO_BIGRAMS[t].split():
            raw[t, vocab.id_of(word)] = 8.0
        raw[t, vocab.id_of(DEMO_SYSTEMS[t].lower())] = 2.0
        group = t // _GROUP_SIZE
        for tok in tokenize(_GROUP_SENTENCES[group]):
            raw[t, vocab.id_of(tok.normalized)] = 3.0
    for word in DEMO_SECONDARY.split():
        raw[0, vocab.id_of(word)] = 7.0
    # tiny jitter keeps every topic pair's similarity distinct, so rank
    # thresholding can hit any requested density without tie plateaus
    raw += rng.uniform(0.0, 0.01, size=raw.shape)
    beta = sparse.csr_matrix(_normalize_rows(raw))
    theta = np.zeros((len(docs), k), dtype=np.float64)
    for i, doc in enumerate(docs):
        t = int(doc.id.split("-")[1])
        theta[i, t] = 0.82
        others = [x for x in range(k) if x != t]
        for x in rng.choice(others, size=3, replace=False):
            theta[i, x] = 0.06

    model = TopicModel(theta=theta, beta=beta, vocabulary=vocab)
    expected = dict(enumerate(DEMO_BIGRAMS))
    return DemoBundle(
        corpus=corpus, model=model, stopwords=DEFAULT_STOPWORDS,
        expected_labels=expected,
    )


def write_bundle(bundle: SynthBundle, out_dir: str | Path) -> dict[str, Path]:
    """Dump a bundle in the formats the loaders read back."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": out / "corpus.jsonl",
        "beta": out / "beta.tsv",
        "theta": out / "theta.tsv",
        "vocab": out / "vocab.txt",
        "stopwords": out / "stopwords.txt",
    }
    save_corpus(bundle.corpus, paths["corpus"])
    with open(paths["vocab"], "w", encoding="utf-8") as fh:
        for term in bundle.model.vocabulary.terms:
            fh.write(term + "\n")
    beta = bundle.model.beta.tocoo()
    with open(paths["beta"], "w", encoding="utf-8") as fh:
        for t, w, v in zip(beta.row, beta.col, beta.data):
            fh.write(f"{t}\t{w}\t{float(v)!r}\n")
    with open(paths["theta"], "w", encoding="utf-8") as fh:
        for i, row in enumerate(bundle.model.theta):
            for t in np.nonzero(row)[0]:
                fh.write(f"{i}\t{t}\t{float(row[t])!r}\n")
    with open(paths["stopwords"], "w", encoding="utf-8") as fh:
        for word in sorted(bundle.stopwords):
            fh.write(word + "\n")
    return paths
