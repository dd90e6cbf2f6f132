"""Topic graph types, weighted Louvain community detection, connected
components, and export to GEXF, GraphML, and JSON node-link documents.

Exports are hand-rendered with fixed element ordering and no timestamps,
so identical inputs produce byte-identical documents.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from xml.etree import ElementTree as ET

GAIN_MIN = 1e-9  # a move must beat this modularity gain to happen

EXPORT_FORMATS = ("gexf", "graphml", "json")


@dataclass(frozen=True)
class Edge:
    x: int
    y: int
    weight: float


@dataclass
class EdgeList:
    edges: list[Edge]
    threshold: float

    def __post_init__(self) -> None:
        seen = set()
        for e in self.edges:
            if e.x >= e.y:
                raise ValueError(f"edge ({e.x}, {e.y}) must satisfy x < y")
            if (e.x, e.y) in seen:
                raise ValueError(f"duplicate edge ({e.x}, {e.y})")
            if not e.weight > self.threshold:
                raise ValueError(
                    f"edge ({e.x}, {e.y}) weight {e.weight} not above "
                    f"threshold {self.threshold}"
                )
            seen.add((e.x, e.y))

    def __iter__(self):
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class TopicNode:
    topic_id: int
    label: str = ""
    doc_count: int = 0
    community: int = 0


@dataclass
class TopicGraph:
    nodes: list[TopicNode]
    edges: EdgeList

    def __post_init__(self) -> None:
        ids = {n.topic_id for n in self.nodes}
        if len(ids) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for e in self.edges:
            if e.x not in ids or e.y not in ids:
                raise ValueError(f"edge ({e.x}, {e.y}) references unknown node")

    @property
    def node_ids(self) -> list[int]:
        return [n.topic_id for n in self.nodes]

    def node(self, topic_id: int) -> TopicNode:
        for n in self.nodes:
            if n.topic_id == topic_id:
                return n
        raise KeyError(topic_id)

    def adjacency(self) -> dict[int, dict[int, float]]:
        adj: dict[int, dict[int, float]] = {n.topic_id: {} for n in self.nodes}
        for e in self.edges:
            adj[e.x][e.y] = e.weight
            adj[e.y][e.x] = e.weight
        return adj

    @property
    def density(self) -> float:
        k = len(self.nodes)
        possible = k * (k - 1) / 2
        return len(self.edges) / possible if possible else 0.0


@dataclass
class Partition:
    """Community assignment with ids contiguous from 0."""

    community_of: dict[int, int]
    levels: list[dict[int, int]] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.community_of:
            ids = set(self.community_of.values())
            if ids != set(range(len(ids))):
                raise ValueError("community ids must be contiguous from 0")

    @property
    def n_communities(self) -> int:
        return len(set(self.community_of.values()))


def _canonicalize(raw: dict[int, int], node_order: list[int]) -> dict[int, int]:
    # relabel communities 0.. in order of first appearance over node_order
    relabel: dict[int, int] = {}
    out = {}
    for nid in node_order:
        c = raw[nid]
        if c not in relabel:
            relabel[c] = len(relabel)
        out[nid] = relabel[c]
    return out


def modularity(graph: TopicGraph, partition: Partition) -> float:
    """Weighted modularity Q = sum_c [S_in/2m - (S_tot/2m)^2].

    S_in counts intra-community weight from both endpoints (2x the edge
    sum), S_tot is the summed weighted degree. An edgeless graph has
    Q = 0 by convention.
    """
    comm = partition.community_of
    for nid in graph.node_ids:
        if nid not in comm:
            raise ValueError(f"partition does not cover node {nid}")
    m2 = 2.0 * sum(e.weight for e in graph.edges)
    if m2 == 0.0:
        return 0.0
    s_in: dict[int, float] = defaultdict(float)
    s_tot: dict[int, float] = defaultdict(float)
    for e in graph.edges:
        if comm[e.x] == comm[e.y]:
            s_in[comm[e.x]] += 2.0 * e.weight
        s_tot[comm[e.x]] += e.weight
        s_tot[comm[e.y]] += e.weight
    communities = set(comm[nid] for nid in graph.node_ids)
    return sum(
        s_in[c] / m2 - (s_tot[c] / m2) ** 2
        for c in communities
    )


def _internal_q(adj, loops, part, m2) -> float:
    # adjacency in matrix sense: loops[i] is A_ii, adj holds both directions
    s_in: dict[int, float] = defaultdict(float)
    s_tot: dict[int, float] = defaultdict(float)
    for i, nbrs in enumerate(adj):
        c = part[i]
        k_i = loops[i] + sum(nbrs.values())
        s_tot[c] += k_i
        s_in[c] += loops[i]
        for j, w in nbrs.items():
            if part[j] == c:
                s_in[c] += w
    return sum(s_in[c] / m2 - (s_tot[c] / m2) ** 2 for c in s_in)


def _local_moves(adj, loops, part, rng) -> bool:
    """Greedy single-node moves until no move gains more than GAIN_MIN.

    part is mutated in place; returns whether anything moved. Each full
    pass may not decrease modularity (asserted with 1e-12 slack).
    """
    n = len(adj)
    k = [loops[i] + sum(adj[i].values()) for i in range(n)]
    m2 = sum(k)
    if m2 == 0.0:
        return False
    s_tot: dict[int, float] = defaultdict(float)
    for i in range(n):
        s_tot[part[i]] += k[i]

    moved_any = False
    while True:
        q_before = _internal_q(adj, loops, part, m2)
        order = list(range(n))
        rng.shuffle(order)
        moved_this_pass = False
        for i in order:
            ci = part[i]
            links: dict[int, float] = defaultdict(float)
            for j, w in adj[i].items():
                links[part[j]] += w
            s_tot[ci] -= k[i]
            # score(c) differs from the true gain only by a factor of 1/m;
            # ties keep the lowest community id because candidates are sorted
            stay = links.get(ci, 0.0) - s_tot[ci] * k[i] / m2
            best_c, best_score = ci, stay
            for c in sorted(links):
                sc = links[c] - s_tot[c] * k[i] / m2
                if sc > best_score:
                    best_c, best_score = c, sc
            gain = (best_score - stay) / (m2 / 2.0)
            if best_c != ci and gain > GAIN_MIN:
                part[i] = best_c
                moved_this_pass = True
                moved_any = True
            s_tot[part[i]] += k[i]
        q_after = _internal_q(adj, loops, part, m2)
        assert q_after >= q_before - 1e-12, "modularity decreased within a pass"
        if not moved_this_pass:
            return moved_any


def _aggregate(adj, loops, part):
    comm_ids = sorted(set(part))
    comm_index = {c: i for i, c in enumerate(comm_ids)}
    n_comm = len(comm_ids)
    agg_adj: list[dict[int, float]] = [dict() for _ in range(n_comm)]
    agg_loops = [0.0] * n_comm
    for i, nbrs in enumerate(adj):
        ci = comm_index[part[i]]
        agg_loops[ci] += loops[i]
        for j, w in nbrs.items():
            cj = comm_index[part[j]]
            if ci == cj:
                agg_loops[ci] += w  # both directions pass here, so 2x edge sum
            else:
                agg_adj[ci][cj] = agg_adj[ci].get(cj, 0.0) + w
    return agg_adj, agg_loops, comm_index


def louvain(graph: TopicGraph, seed: int = 0) -> Partition:
    """Seeded Louvain on edge weights.

    Alternates greedy single-node moves on the original graph with moves
    on the aggregated community graph until neither finds a gain above
    GAIN_MIN. Ending on a converged node-level phase guarantees no single
    node can improve modularity at termination. The per-level partitions
    are kept on the returned Partition.
    """
    if not graph.nodes:
        raise ValueError("graph has no nodes")
    node_ids = graph.node_ids
    index = {nid: i for i, nid in enumerate(node_ids)}
    n = len(node_ids)
    adj: list[dict[int, float]] = [dict() for _ in range(n)]
    for e in graph.edges:
        i, j = index[e.x], index[e.y]
        adj[i][j] = adj[i].get(j, 0.0) + e.weight
        adj[j][i] = adj[j].get(i, 0.0) + e.weight
    loops = [0.0] * n

    rng = random.Random(seed)
    part = list(range(n))
    levels: list[dict[int, int]] = []

    while True:
        _local_moves(adj, loops, part, rng)
        levels.append({nid: part[index[nid]] for nid in node_ids})
        agg_adj, agg_loops, comm_index = _aggregate(adj, loops, part)
        agg_part = list(range(len(agg_adj)))
        if not _local_moves(agg_adj, agg_loops, agg_part, rng):
            break
        part = [agg_part[comm_index[part[i]]] for i in range(n)]

    raw = {nid: part[index[nid]] for nid in node_ids}
    community_of = _canonicalize(raw, sorted(node_ids))
    canonical_levels = [_canonicalize(lv, sorted(node_ids)) for lv in levels]
    return Partition(community_of=community_of, levels=canonical_levels)


def connected_components(graph: TopicGraph) -> list[set[int]]:
    """Maximal connected node sets, ordered by smallest member id."""
    adj = graph.adjacency()
    seen: set[int] = set()
    components = []
    for start in sorted(adj):
        if start in seen:
            continue
        queue = deque([start])
        comp = {start}
        seen.add(start)
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.add(v)
                    queue.append(v)
        components.append(comp)
    return components


def _sorted_edges(graph: TopicGraph) -> list[Edge]:
    return sorted(graph.edges, key=lambda e: (e.x, e.y))


def _export_gexf(graph: TopicGraph) -> str:
    root = ET.Element("gexf", {
        "xmlns": "http://www.gexf.net/1.2draft",
        "version": "1.2",
    })
    g = ET.SubElement(root, "graph", {
        "mode": "static", "defaultedgetype": "undirected",
    })
    attrs = ET.SubElement(g, "attributes", {"class": "node"})
    ET.SubElement(attrs, "attribute", {
        "id": "doc_count", "title": "doc_count", "type": "integer"})
    ET.SubElement(attrs, "attribute", {
        "id": "community", "title": "community", "type": "integer"})
    nodes_el = ET.SubElement(g, "nodes")
    for node in graph.nodes:
        # the topic label rides on the intrinsic GEXF label attribute
        n_el = ET.SubElement(nodes_el, "node", {
            "id": str(node.topic_id), "label": node.label,
        })
        av = ET.SubElement(n_el, "attvalues")
        ET.SubElement(av, "attvalue", {"for": "doc_count", "value": str(node.doc_count)})
        ET.SubElement(av, "attvalue", {"for": "community", "value": str(node.community)})
    edges_el = ET.SubElement(g, "edges")
    for idx, e in enumerate(_sorted_edges(graph)):
        ET.SubElement(edges_el, "edge", {
            "id": str(idx), "source": str(e.x), "target": str(e.y),
            "weight": repr(float(e.weight)),
        })
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(
        root, encoding="unicode") + "\n"


def _export_graphml(graph: TopicGraph) -> str:
    root = ET.Element("graphml", {
        "xmlns": "http://graphml.graphdrawing.org/xmlns",
    })
    for key_id, domain, name, typ in (
        ("d_label", "node", "label", "string"),
        ("d_doc_count", "node", "doc_count", "int"),
        ("d_community", "node", "community", "int"),
        ("d_weight", "edge", "weight", "double"),
    ):
        ET.SubElement(root, "key", {
            "id": key_id, "for": domain, "attr.name": name, "attr.type": typ,
        })
    g = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "undirected"})
    for node in graph.nodes:
        n_el = ET.SubElement(g, "node", {"id": str(node.topic_id)})
        ET.SubElement(n_el, "data", {"key": "d_label"}).text = node.label
        ET.SubElement(n_el, "data", {"key": "d_doc_count"}).text = str(node.doc_count)
        ET.SubElement(n_el, "data", {"key": "d_community"}).text = str(node.community)
    for e in _sorted_edges(graph):
        e_el = ET.SubElement(g, "edge", {"source": str(e.x), "target": str(e.y)})
        ET.SubElement(e_el, "data", {"key": "d_weight"}).text = repr(float(e.weight))
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(
        root, encoding="unicode") + "\n"


def _export_json(graph: TopicGraph) -> str:
    payload = {
        "directed": False,
        "multigraph": False,
        "graph": {"threshold": graph.edges.threshold},
        "nodes": [
            {
                "id": n.topic_id,
                "label": n.label,
                "doc_count": n.doc_count,
                "community": n.community,
            }
            for n in graph.nodes
        ],
        "links": [
            {"source": e.x, "target": e.y, "weight": e.weight}
            for e in _sorted_edges(graph)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def export_graph(graph: TopicGraph, fmt: str) -> str:
    """Serialize with label, doc_count, and community on nodes and weight
    on edges. Formats: gexf, graphml, json (node-link)."""
    if fmt == "gexf":
        return _export_gexf(graph)
    if fmt == "graphml":
        return _export_graphml(graph)
    if fmt == "json":
        return _export_json(graph)
    raise ValueError(f"unknown export format {fmt!r}, expected one of {EXPORT_FORMATS}")
