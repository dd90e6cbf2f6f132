"""HTTP service over a built topic network.

Serves the node-link graph, supports faceted/keyword filtering of the
underlying documents, and relabels topics against a filtered subset
without touching the model or the graph. Filters are content-addressed:
the same facets and keywords always map to the same filter id, and label
computations are cached per (filter, topic, C, L).
"""

from __future__ import annotations

import hashlib
import json
import threading
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .graph import Partition, TopicGraph, louvain
from .labeling import DegenerateSplitWarning, docset_label, label_topics
from .model import Corpus, TopicAssignment, TopicModel, assign_clusters
from .similarity import (
    SimilarityMatrix,
    build_network,
    pairwise_similarities,
    select_threshold,
)
from .textprep import DEFAULT_STOPWORDS, CorpusAnalysis, analyze_corpus, tokenize

SCHEMA_VERSION = 1
LABEL_CACHE_SIZE = 64
SNIPPET_CHARS = 160


@dataclass(frozen=True)
class FilterSpec:
    """Conjunction of facet equalities and keyword containment."""

    facets: tuple[tuple[str, str], ...]
    keywords: tuple[str, ...]

    @classmethod
    def of(cls, facets: dict[str, str], keywords: list[str]) -> "FilterSpec":
        return cls(
            facets=tuple(sorted(facets.items())),
            keywords=tuple(sorted({k.lower() for k in keywords if k.strip()})),
        )

    @property
    def fingerprint(self) -> str:
        return json.dumps(
            {"facets": list(self.facets), "keywords": list(self.keywords)},
            sort_keys=True, separators=(",", ":"),
        )

    @property
    def filter_id(self) -> str:
        return hashlib.sha256(self.fingerprint.encode()).hexdigest()[:16]


@dataclass
class FilterResult:
    spec: FilterSpec
    doc_ids: frozenset[str]
    per_topic: dict[int, int]


@dataclass
class SessionState:
    """Everything the endpoints read; built once, never mutated by GETs."""

    corpus: Corpus
    model: TopicModel
    assignment: TopicAssignment
    graph: TopicGraph
    partition: Partition
    analysis: CorpusAnalysis
    sims: SimilarityMatrix
    xi: float
    labels: dict[int, list[str]]
    c: int = 5
    l: int = 1
    doc_tokens: dict[str, frozenset[str]] = field(default_factory=dict)
    filters: dict[str, FilterResult] = field(default_factory=dict)
    active_filter: str | None = None
    identity_id: str = ""

    def __post_init__(self) -> None:
        self._master = threading.Lock()
        self._inflight: dict[str, threading.Lock] = {}
        self._cache: OrderedDict[tuple, dict] = OrderedDict()
        if not self.doc_tokens:
            self.doc_tokens = {
                doc.id: frozenset(t.normalized for t in tokenize(doc.text))
                for doc in self.corpus
            }
        identity = apply_filter(self, {}, [])
        self.identity_id = identity.spec.filter_id

    # label cache, LRU over (filter_id, topic, C, L)

    def cache_get(self, key: tuple) -> dict | None:
        with self._master:
            hit = self._cache.get(key)
            if hit is not None:
                self._cache.move_to_end(key)
            return hit

    def cache_put(self, key: tuple, value: dict) -> None:
        with self._master:
            self._cache[key] = value
            self._cache.move_to_end(key)
            while len(self._cache) > LABEL_CACHE_SIZE:
                self._cache.popitem(last=False)

    def lock_for(self, filter_id: str) -> threading.Lock:
        with self._master:
            return self._inflight.setdefault(filter_id, threading.Lock())


def build_session(
    corpus: Corpus,
    model: TopicModel,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    *,
    xi: float | None = None,
    target_density: float | None = None,
    c: int = 5,
    l: int = 1,
    seed: int = 0,
    workers: int = 1,
) -> SessionState:
    """Run the batch pipeline in memory and wrap the artifacts."""
    if xi is not None and target_density is not None:
        raise ValueError("set either xi or target_density, not both")
    if xi is None and target_density is None:
        target_density = 0.01

    assignment = assign_clusters(model)
    analysis = analyze_corpus(corpus, stopwords, workers=workers)
    sims = pairwise_similarities(model.beta)
    if xi is None:
        xi = select_threshold(sims, target_density)
    graph = build_network(sims, xi, assignment)
    partition = louvain(graph, seed=seed)
    batch = label_topics(assignment, corpus, analysis, model, c=c, l=l)
    labels = {t: [cand.display for cand in batch[t]] for t in batch}
    for node in graph.nodes:
        node.community = partition.community_of[node.topic_id]
        node.label = labels[node.topic_id][0] if labels[node.topic_id] else ""
    return SessionState(
        corpus=corpus, model=model, assignment=assignment, graph=graph,
        partition=partition, analysis=analysis, sims=sims, xi=float(xi),
        labels=labels, c=c, l=l,
    )


def apply_filter(
    session: SessionState, facets: dict[str, str], keywords: list[str]
) -> FilterResult:
    """Resolve a filter to its document set; idempotent by fingerprint.

    Unknown facet keys match nothing rather than erroring, and keywords
    match case-insensitively against the document's token set.
    """
    spec = FilterSpec.of(facets, keywords)
    fid = spec.filter_id
    cached = session.filters.get(fid)
    if cached is not None:
        return cached

    kept = []
    for doc in session.corpus:
        if any(doc.facets.get(k) != v for k, v in spec.facets):
            continue
        tokens = session.doc_tokens[doc.id]
        if any(term not in tokens for term in spec.keywords):
            continue
        kept.append(doc.id)
    doc_ids = frozenset(kept)

    per_topic = {t: 0 for t in range(session.model.n_topics)}
    for i, doc in enumerate(session.corpus):
        if doc.id in doc_ids:
            per_topic[int(session.assignment.cluster_of[i])] += 1

    result = FilterResult(spec=spec, doc_ids=doc_ids, per_topic=per_topic)
    with session._master:
        session.filters.setdefault(fid, result)
    return session.filters[fid]


def relabel(
    session: SessionState,
    topics: list[int],
    filter_id: str,
    c: int | None = None,
    l: int | None = None,
) -> dict[int, dict]:
    """Relabel topics against the filtered document set.

    Both sides of the gain split shrink to the filtered corpus, so labels
    describe what is left, not what the batch run saw. Topics with no
    remaining documents come back flagged empty instead of erroring.
    """
    c = session.c if c is None else c
    l = session.l if l is None else l
    flt = session.filters[filter_id]
    out: dict[int, dict] = {}
    pending = []
    for t in topics:
        hit = session.cache_get((filter_id, t, c, l))
        if hit is not None:
            out[t] = hit
        else:
            pending.append(t)
    if not pending:
        return out

    with session.lock_for(filter_id):
        sub = None
        for t in pending:
            key = (filter_id, t, c, l)
            hit = session.cache_get(key)
            if hit is not None:
                out[t] = hit
                continue
            if sub is None:
                sub = CorpusAnalysis(
                    docs={i: a for i, a in session.analysis.docs.items()
                          if i in flt.doc_ids},
                    stats=session.analysis.stats,
                )
            members = {
                session.corpus[int(i)].id for i in session.assignment.members(t)
            } & flt.doc_ids
            if not members:
                entry = {"labels": [], "empty": True, "degenerate": False}
            else:
                degenerate = members == set(sub.docs)
                row = session.model.beta.getrow(t).toarray().ravel()
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", DegenerateSplitWarning)
                    cands = docset_label(
                        members, sub, row, session.model.vocabulary, c=c, l=l
                    )
                entry = {
                    "labels": [cand.display for cand in cands],
                    "empty": False,
                    "degenerate": degenerate,
                }
            session.cache_put(key, entry)
            out[t] = entry
    return out


def graph_payload(
    session: SessionState,
    include_labels: bool = True,
    filter_id: str | None = None,
) -> dict:
    """Node-link document mirroring the file export, plus filtered counts."""
    fid = filter_id or session.active_filter or session.identity_id
    flt = session.filters[fid]
    nodes = []
    for n in session.graph.nodes:
        entry: dict = {"id": n.topic_id}
        if include_labels:
            entry["label"] = n.label
        entry["doc_count"] = n.doc_count
        entry["community"] = n.community
        entry["filtered_count"] = flt.per_topic[n.topic_id]
        nodes.append(entry)
    links = [
        {"source": e.x, "target": e.y, "weight": e.weight}
        for e in sorted(session.graph.edges, key=lambda e: (e.x, e.y))
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "directed": False,
        "multigraph": False,
        "graph": {"threshold": session.graph.edges.threshold},
        "filter_id": fid,
        "nodes": nodes,
        "links": links,
    }


class FilterRequest(BaseModel):
    facets: dict[str, str] = {}
    keywords: list[str] = []


class RelabelRequest(BaseModel):
    filter_id: str | None = None
    topics: list[int] | None = None
    C: int | None = None
    L: int | None = None


def create_app(session: SessionState | None) -> FastAPI:
    """FastAPI wiring; a None session yields 503s until one is attached."""
    app = FastAPI(title="topicatlas", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = session

    def need_session() -> SessionState:
        live = app.state.session
        if live is None:
            raise HTTPException(status_code=503, detail="session not initialized")
        return live

    def resolve_filter(live: SessionState, filter_id: str | None) -> str:
        fid = filter_id or live.identity_id
        if fid not in live.filters:
            raise HTTPException(status_code=404, detail=f"unknown filter_id {fid!r}")
        return fid

    @app.get("/health")
    def health():
        live = need_session()
        return {
            "schema_version": SCHEMA_VERSION,
            "status": "ok",
            "topics": live.model.n_topics,
            "documents": live.corpus.size,
        }

    @app.get("/graph")
    def get_graph(
        labels: bool = True,
        filter_id: str | None = Query(default=None),
    ):
        live = need_session()
        fid = resolve_filter(live, filter_id or live.active_filter)
        return graph_payload(live, include_labels=labels, filter_id=fid)

    @app.post("/filter")
    def post_filter(req: FilterRequest):
        live = need_session()
        result = apply_filter(live, req.facets, req.keywords)
        live.active_filter = result.spec.filter_id
        return {
            "schema_version": SCHEMA_VERSION,
            "filter_id": result.spec.filter_id,
            "doc_count": len(result.doc_ids),
            "per_topic_counts": {str(t): n for t, n in sorted(result.per_topic.items())},
        }

    @app.post("/relabel")
    def post_relabel(req: RelabelRequest):
        live = need_session()
        fid = resolve_filter(live, req.filter_id)
        c = live.c if req.C is None else req.C
        l = live.l if req.L is None else req.L
        if not (c >= l >= 1):
            raise HTTPException(status_code=422, detail="need C >= L >= 1")
        topics = req.topics if req.topics is not None else list(range(live.model.n_topics))
        bad = [t for t in topics if not 0 <= t < live.model.n_topics]
        if bad:
            raise HTTPException(status_code=422, detail=f"unknown topics {bad}")
        result = relabel(live, topics, fid, c=c, l=l)
        return {
            "schema_version": SCHEMA_VERSION,
            "filter_id": fid,
            "labels": {str(t): result[t] for t in sorted(result)},
        }

    @app.get("/topics/{topic_id}/documents")
    def topic_documents(
        topic_id: int,
        filter_id: str | None = Query(default=None),
        page: int = Query(default=0, ge=0),
        page_size: int = Query(default=20, ge=1, le=200),
    ):
        live = need_session()
        if not 0 <= topic_id < live.model.n_topics:
            raise HTTPException(status_code=404, detail=f"unknown topic {topic_id}")
        fid = resolve_filter(live, filter_id)
        flt = live.filters[fid]
        members = [
            live.corpus[int(i)].id
            for i in live.assignment.members(topic_id)
            if live.corpus[int(i)].id in flt.doc_ids
        ]
        start = page * page_size
        window = members[start:start + page_size]
        return {
            "schema_version": SCHEMA_VERSION,
            "topic": topic_id,
            "filter_id": fid,
            "total": len(members),
            "page": page,
            "page_size": page_size,
            "documents": [
                {"id": did, "snippet": live.corpus.by_id(did).text[:SNIPPET_CHARS]}
                for did in window
            ],
        }

    return app
