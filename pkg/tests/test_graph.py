import io
import json

import networkx as nx
import numpy as np
import pytest

from topicatlas.graph import (
    Edge,
    EdgeList,
    Partition,
    TopicGraph,
    TopicNode,
    _canonicalize,
    connected_components,
    export_graph,
    louvain,
    modularity,
)


def make_graph(n, edges, threshold=0.0, labels=None, doc_counts=None):
    nodes = [
        TopicNode(
            topic_id=i,
            label=(labels or {}).get(i, ""),
            doc_count=(doc_counts or {}).get(i, 0),
        )
        for i in range(n)
    ]
    edge_objs = [Edge(x=x, y=y, weight=w) for x, y, w in edges]
    return TopicGraph(nodes=nodes, edges=EdgeList(edges=edge_objs, threshold=threshold))


def clique_graph(n_cliques, size, weight=1.0):
    edges = []
    for c in range(n_cliques):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j, weight))
    return make_graph(n_cliques * size, edges)


def partition_from(mapping):
    order = sorted(mapping)
    return Partition(community_of=_canonicalize(mapping, order))


def random_graph(rng, n, p):
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, float(rng.uniform(0.05, 1.0))))
    return make_graph(n, edges)


def assert_single_node_optimal(graph, partition, tol=1e-9):
    """No single node can move to any community and gain more than tol."""
    base = modularity(graph, partition)
    comm = dict(partition.community_of)
    communities = set(comm.values())
    fresh = max(communities) + 1
    for nid in graph.node_ids:
        original = comm[nid]
        for target in communities | {fresh}:
            if target == original:
                continue
            comm[nid] = target
            q = modularity(graph, partition_from(comm))
            assert q <= base + tol, (
                f"moving node {nid} to community {target} gains {q - base}"
            )
        comm[nid] = original


class TestEdgeListInvariants:
    def test_requires_x_less_than_y(self):
        with pytest.raises(ValueError, match="x < y"):
            EdgeList(edges=[Edge(2, 1, 0.5)], threshold=0.0)

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError, match="duplicate"):
            EdgeList(edges=[Edge(0, 1, 0.5), Edge(0, 1, 0.6)], threshold=0.0)

    def test_rejects_weight_at_or_below_threshold(self):
        with pytest.raises(ValueError, match="not above"):
            EdgeList(edges=[Edge(0, 1, 0.3)], threshold=0.3)

    def test_graph_rejects_unknown_endpoint(self):
        with pytest.raises(ValueError, match="unknown node"):
            make_graph(2, [(0, 5, 0.5)])


class TestModularity:
    def test_one_community_is_zero(self):
        g = clique_graph(1, 4)
        part = partition_from({i: 0 for i in range(4)})
        assert modularity(g, part) == pytest.approx(0.0, abs=1e-15)

    def test_four_disjoint_five_cliques(self):
        g = clique_graph(4, 5)
        part = partition_from({i: i // 5 for i in range(20)})
        assert modularity(g, part) == pytest.approx(0.75, abs=1e-12)

    def test_edgeless_graph_is_zero(self):
        g = make_graph(3, [])
        part = partition_from({0: 0, 1: 1, 2: 2})
        assert modularity(g, part) == 0.0

    def test_uncovered_node_rejected(self):
        g = clique_graph(1, 3)
        with pytest.raises(ValueError, match="cover"):
            modularity(g, Partition(community_of={0: 0, 1: 0}))

    def test_within_bounds_on_random_partitions(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            g = random_graph(rng, 12, 0.3)
            mapping = {i: int(rng.integers(0, 4)) for i in range(12)}
            q = modularity(g, partition_from(mapping))
            assert -1.0 <= q <= 1.0


class TestPartition:
    def test_contiguity_enforced(self):
        with pytest.raises(ValueError, match="contiguous"):
            Partition(community_of={0: 0, 1: 2})

    def test_n_communities(self):
        part = Partition(community_of={0: 0, 1: 1, 2: 0})
        assert part.n_communities == 2


class TestLouvain:
    def test_edgeless_graph_gives_singletons(self):
        g = make_graph(5, [])
        part = louvain(g, seed=0)
        assert part.n_communities == 5

    def test_two_disjoint_triangles(self):
        g = clique_graph(2, 3)
        part = louvain(g, seed=0)
        assert part.n_communities == 2
        assert len({part.community_of[i] for i in (0, 1, 2)}) == 1
        assert len({part.community_of[i] for i in (3, 4, 5)}) == 1

    def test_four_five_cliques_reach_reference_modularity(self):
        g = clique_graph(4, 5)
        part = louvain(g, seed=0)
        assert part.n_communities == 4
        assert modularity(g, part) == pytest.approx(0.75, abs=1e-9)

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(31)
        g = random_graph(rng, 25, 0.2)
        assert louvain(g, seed=42).community_of == louvain(g, seed=42).community_of

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError, match="no nodes"):
            louvain(make_graph(0, []), seed=0)

    def test_single_node(self):
        part = louvain(make_graph(1, []), seed=0)
        assert part.community_of == {0: 0}

    def test_no_single_node_move_improves(self):
        rng = np.random.default_rng(13)
        for trial in range(8):
            g = random_graph(rng, int(rng.integers(6, 25)), float(rng.uniform(0.1, 0.5)))
            part = louvain(g, seed=trial)
            assert_single_node_optimal(g, part)

    def test_weights_steer_communities(self):
        # two triangles joined by a weak bridge stay separate communities
        edges = [
            (0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0),
            (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0),
            (2, 3, 0.01),
        ]
        part = louvain(make_graph(6, edges), seed=0)
        assert part.community_of[0] == part.community_of[2]
        assert part.community_of[3] == part.community_of[5]
        assert part.community_of[0] != part.community_of[3]

    def test_levels_recorded(self):
        part = louvain(clique_graph(2, 3), seed=0)
        assert part.levels
        assert set(part.levels[-1]) == set(range(6))


class TestConnectedComponents:
    def test_complete_graph_single_component(self):
        g = clique_graph(1, 4)
        assert connected_components(g) == [{0, 1, 2, 3}]

    def test_edgeless_graph_singletons(self):
        g = make_graph(3, [])
        assert connected_components(g) == [{0}, {1}, {2}]

    def test_two_pairs_and_isolate(self):
        g = make_graph(5, [(0, 1, 0.5), (2, 3, 0.5)])
        assert connected_components(g) == [{0, 1}, {2, 3}, {4}]

    def test_components_partition_nodes(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            g = random_graph(rng, 15, 0.15)
            comps = connected_components(g)
            union = set().union(*comps) if comps else set()
            assert union == set(range(15))
            assert sum(len(c) for c in comps) == 15


def annotated_graph():
    g = make_graph(
        3,
        [(0, 1, 0.4217), (1, 2, 0.25)],
        threshold=0.2,
        labels={0: "graph theory", 1: "protein folding", 2: "fluid dynamics"},
        doc_counts={0: 12, 1: 5, 2: 9},
    )
    g.nodes[0].community = 0
    g.nodes[1].community = 0
    g.nodes[2].community = 1
    return g


class TestExport:
    def test_json_single_node(self):
        g = make_graph(1, [], labels={0: "solo"}, doc_counts={0: 3})
        payload = json.loads(export_graph(g, "json"))
        assert payload["nodes"] == [
            {"id": 0, "label": "solo", "doc_count": 3, "community": 0}
        ]
        assert payload["links"] == []
        assert payload["directed"] is False

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError, match="dotx"):
            export_graph(annotated_graph(), "dotx")

    def test_gexf_round_trip(self):
        g = annotated_graph()
        doc = export_graph(g, "gexf")
        back = nx.read_gexf(io.BytesIO(doc.encode()), node_type=int)
        assert set(back.nodes) == {0, 1, 2}
        for node in g.nodes:
            attrs = back.nodes[node.topic_id]
            assert attrs["label"] == node.label
            assert attrs["doc_count"] == node.doc_count
            assert attrs["community"] == node.community
        assert back.edges[0, 1]["weight"] == 0.4217
        assert back.edges[1, 2]["weight"] == 0.25

    def test_graphml_round_trip(self):
        g = annotated_graph()
        doc = export_graph(g, "graphml")
        back = nx.read_graphml(io.BytesIO(doc.encode()))
        assert set(back.nodes) == {"0", "1", "2"}
        for node in g.nodes:
            attrs = back.nodes[str(node.topic_id)]
            assert attrs["label"] == node.label
            assert attrs["doc_count"] == node.doc_count
            assert attrs["community"] == node.community
        assert back.edges["0", "1"]["weight"] == 0.4217

    def test_exports_are_deterministic(self):
        g = annotated_graph()
        for fmt in ("gexf", "graphml", "json"):
            assert export_graph(g, fmt) == export_graph(g, fmt)

    def test_no_timestamps_in_exports(self):
        doc = export_graph(annotated_graph(), "gexf")
        assert "lastmodifieddate" not in doc
