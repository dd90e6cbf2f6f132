"""Pairwise topic similarity from beta rows, threshold selection, and the
edge set of the topic network.

The similarity is 1 - (1/sqrt(2)) * sqrt(sum_i (sqrt(p_i) - sqrt(q_i))^2),
a unit-interval rescaling of Hellinger distance. Unlike KL divergence it
is symmetric and metric-derived, so thresholding it yields an undirected
graph with consistent semantics.

Two evaluation routes are kept deliberately separate: a direct pairwise
computation over sparse rows, and an in-process map/reduce decomposition
keyed by word column. Tests hold them to agreement within 1e-12.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from topicatlas.graph import Edge, EdgeList, TopicGraph, TopicNode
from topicatlas.model import TopicAssignment

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class EmptyGraphWarning(UserWarning):
    """The selected threshold keeps no edges at all."""


@dataclass
class SimilarityMatrix:
    values: np.ndarray

    @property
    def k(self) -> int:
        return self.values.shape[0]

    def offdiagonal(self) -> np.ndarray:
        """Upper-triangle similarities as a flat array (one per pair)."""
        iu = np.triu_indices(self.k, k=1)
        return self.values[iu]


@dataclass(frozen=True)
class PairContribution:
    pair: tuple[int, int]
    value: float


def _clamp01(x: float) -> float:
    # sqrt of a near-zero sum can drift a few ulps past the interval
    return min(1.0, max(0.0, x))


def hellinger_similarity(p: Sequence[float], q: Sequence[float]) -> float:
    """Similarity between two dense probability vectors.

    Summation uses numpy's pairwise algorithm over the nonnegative squared
    differences, keeping absolute error near machine epsilon.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    d = np.sqrt(p) - np.sqrt(q)
    s = float(np.sum(d * d))
    return _clamp01(1.0 - INV_SQRT2 * math.sqrt(s))


def _row_views(beta: sparse.csr_matrix):
    beta = beta.tocsr()
    beta.sum_duplicates()
    beta.sort_indices()
    rows = []
    for x in range(beta.shape[0]):
        lo, hi = beta.indptr[x], beta.indptr[x + 1]
        data = beta.data[lo:hi]
        rows.append((beta.indices[lo:hi], data, np.sqrt(data)))
    return rows


def _pair_sum(ix, dx, sx, iy, dy, sy) -> float:
    """Squared-difference sum over the union of two sparse rows.

    Word ids present on one side only contribute their beta value exactly
    (the absent side is zero); shared ids contribute the squared root
    difference. Every term is nonnegative, so no cancellation occurs and
    identical rows sum to exactly zero.
    """
    common, ax, ay = np.intersect1d(ix, iy, assume_unique=True, return_indices=True)
    d = sx[ax] - sy[ay]
    s = float(np.sum(d * d))
    mask_x = np.ones(len(ix), dtype=bool)
    mask_x[ax] = False
    mask_y = np.ones(len(iy), dtype=bool)
    mask_y[ay] = False
    return s + float(np.sum(dx[mask_x])) + float(np.sum(dy[mask_y]))


def pairwise_similarities(beta: sparse.csr_matrix) -> SimilarityMatrix:
    """All K(K-1)/2 pair similarities from sparse beta rows."""
    k = beta.shape[0]
    values = np.ones((k, k), dtype=np.float64)
    rows = _row_views(beta)
    for x in range(k):
        ix, dx, sx = rows[x]
        for y in range(x + 1, k):
            iy, dy, sy = rows[y]
            sim = _clamp01(1.0 - INV_SQRT2 * math.sqrt(_pair_sum(ix, dx, sx, iy, dy, sy)))
            values[x, y] = sim
            values[y, x] = sim
    return SimilarityMatrix(values=values)


def map_emit(column: Iterable[tuple[int, float]], k: int) -> list[PairContribution]:
    """Map step: one word column in, per-pair contributions out.

    The column lists (topic id, beta value) for topics where the word has
    mass; every unordered pair with at least one side present is emitted,
    a pair of two absent topics contributes zero and is skipped. For a
    one-sided pair the contribution (sqrt(v) - 0)^2 is the value itself.
    """
    entries = sorted(column)
    seen = set()
    for topic, _ in entries:
        if topic in seen:
            raise ValueError(f"duplicate topic id {topic} in column")
        if not 0 <= topic < k:
            raise ValueError(f"topic id {topic} outside 0..{k - 1}")
        seen.add(topic)
    present = [(t, v) for t, v in entries if v != 0.0]
    out = []
    for a in range(len(present)):
        ta, va = present[a]
        for b in range(a + 1, len(present)):
            tb, vb = present[b]
            out.append(PairContribution(
                pair=(ta, tb), value=(math.sqrt(va) - math.sqrt(vb)) ** 2))
    present_ids = {t for t, _ in present}
    for ta, va in present:
        for tb in range(k):
            if tb in present_ids:
                continue
            pair = (ta, tb) if ta < tb else (tb, ta)
            out.append(PairContribution(pair=pair, value=va))
    return out


def reduce_pair(pair: tuple[int, int], contributions: Iterable[float]) -> float:
    """Reduce step: sum the contributions, take the root, rescale."""
    values = list(contributions)
    for v in values:
        if v < 0:
            raise ValueError(f"negative contribution {v} for pair {pair}")
    total = math.fsum(values)
    return _clamp01(1.0 - INV_SQRT2 * math.sqrt(total))


def mapreduce_similarities(beta: sparse.csr_matrix) -> SimilarityMatrix:
    """Run the full decomposition in process: map over word columns,
    group by pair, reduce each pair. Kept as an independent route to the
    same numbers as pairwise_similarities."""
    k = beta.shape[0]
    csc = beta.tocsc()
    csc.sum_duplicates()
    buckets: dict[tuple[int, int], list[float]] = {}
    for word in range(csc.shape[1]):
        lo, hi = csc.indptr[word], csc.indptr[word + 1]
        column = list(zip(csc.indices[lo:hi].tolist(), csc.data[lo:hi].tolist()))
        if not column:
            continue
        for contrib in map_emit(column, k):
            buckets.setdefault(contrib.pair, []).append(contrib.value)
    values = np.ones((k, k), dtype=np.float64)
    for x in range(k):
        for y in range(x + 1, k):
            sim = reduce_pair((x, y), buckets.get((x, y), []))
            values[x, y] = sim
            values[y, x] = sim
    return SimilarityMatrix(values=values)


def select_threshold(sims: SimilarityMatrix, target_density: float) -> float:
    """Rank-based threshold for a target edge density.

    Returns the smallest observed off-diagonal similarity v such that the
    fraction of pairs strictly above v is at most target_density. A
    target of 1 or more asks for every pair, answered with a value just
    below the minimum (floored at 0, since thresholds live in [0, 1)).
    Warns with EmptyGraphWarning when nothing survives.
    """
    if sims.k < 2:
        raise ValueError("need at least 2 topics to select a threshold")
    vals = np.sort(sims.offdiagonal())
    n_pairs = len(vals)
    if target_density >= 1.0:
        return max(0.0, float(np.nextafter(vals[0], -np.inf)))
    if target_density <= 0.0:
        raise ValueError("target density must be positive")
    candidates = np.unique(vals)
    xi = float(candidates[-1])
    for v in candidates:
        kept = n_pairs - int(np.searchsorted(vals, v, side="right"))
        if kept / n_pairs <= target_density:
            xi = float(v)
            break
    kept = n_pairs - int(np.searchsorted(vals, xi, side="right"))
    if kept == 0:
        warnings.warn(
            f"threshold {xi} keeps no edges (uniform or degenerate similarities)",
            EmptyGraphWarning,
            stacklevel=2,
        )
    return xi


def build_network(
    sims: SimilarityMatrix, xi: float, assignment: TopicAssignment
) -> TopicGraph:
    """Node per topic (sized by document count), edge where similarity
    strictly exceeds xi. Singleton nodes are kept."""
    if not 0.0 <= xi < 1.0:
        raise ValueError(f"threshold {xi} outside [0, 1)")
    k = sims.k
    nodes = [
        TopicNode(topic_id=t, doc_count=int(assignment.doc_counts[t]))
        for t in range(k)
    ]
    edges = []
    for x in range(k):
        for y in range(x + 1, k):
            w = float(sims.values[x, y])
            if w > xi:
                edges.append(Edge(x=x, y=y, weight=w))
    return TopicGraph(nodes=nodes, edges=EdgeList(edges=edges, threshold=xi))


def save_similarities(sims: SimilarityMatrix, path: str | Path) -> None:
    """Audit dump: TSV triplets x, y, similarity for x < y."""
    with open(path, "w", encoding="utf-8") as fh:
        for x in range(sims.k):
            for y in range(x + 1, sims.k):
                fh.write(f"{x}\t{y}\t{float(sims.values[x, y])!r}\n")
