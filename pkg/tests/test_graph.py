import io

import numpy as np
import pytest

from calscan.graph import (EdgeListParseError, Graph, connected_components,
                           erdos_renyi, induced_subgraph, is_connected,
                           load_edge_list, random_walk_subgraph,
                           serialize_edge_list)


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


class TestLoadEdgeList:
    def test_basic(self):
        g = load_edge_list("a b\nb c")
        assert g.node_count == 3
        assert g.edge_count == 2
        assert g.labels == ["a", "b", "c"]
        assert g.has_edge(0, 1) and g.has_edge(1, 2) and not g.has_edge(0, 2)

    def test_dedupe_and_self_loop(self):
        g = load_edge_list("a b\nb a\na a")
        assert g.node_count == 2
        assert g.edge_count == 1

    def test_comment_skip(self):
        g = load_edge_list("# comment\n0 1")
        assert g.node_count == 2
        assert g.edge_count == 1

    def test_malformed_line_reports_number(self):
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list("a b\na b c")

    def test_empty_input(self):
        with pytest.raises(EdgeListParseError, match="empty"):
            load_edge_list("# nothing here\n")

    def test_first_appearance_ids(self):
        g = load_edge_list("x y\nz x")
        assert g.labels == ["x", "y", "z"]

    def test_round_trip(self):
        g = erdos_renyi(40, 0.15, 11)
        text = serialize_edge_list(g)
        g2 = load_edge_list(io.StringIO(text))
        assert g2.node_count == g.node_count
        assert np.array_equal(np.sort(g2.edges(), axis=0), np.sort(g.edges(), axis=0))
        assert g2.fingerprint() == g.fingerprint()


class TestErdosRenyi:
    def test_complete(self):
        g = erdos_renyi(4, 1.0, 0)
        assert g.edge_count == 6

    def test_empty(self):
        g = erdos_renyi(4, 0.0, 0)
        assert g.edge_count == 0

    def test_zero_nodes_rejected(self):
        with pytest.raises(ValueError):
            erdos_renyi(0, 0.5, 0)

    def test_mean_edge_count(self):
        # binomial expectation n(n-1)p/2 = 4995 at n=1000, p=0.01
        counts = [erdos_renyi(1000, 0.01, s).edge_count for s in range(100)]
        mean = np.mean(counts)
        assert abs(mean - 4995) / 4995 < 0.03

    def test_deterministic(self):
        a = erdos_renyi(200, 0.05, 123)
        b = erdos_renyi(200, 0.05, 123)
        assert np.array_equal(a.edges(), b.edges())
        assert a.fingerprint() == b.fingerprint()

    def test_seed_changes_graph(self):
        a = erdos_renyi(200, 0.05, 1)
        b = erdos_renyi(200, 0.05, 2)
        assert a.fingerprint() != b.fingerprint()


class TestRandomWalkSubgraph:
    def test_single_node(self):
        g = path_graph(4)
        s = random_walk_subgraph(g, 1, 9)
        assert len(s) == 1

    def test_path_full(self):
        g = path_graph(5)
        assert random_walk_subgraph(g, 5, 3) == frozenset(range(5))

    def test_connected_on_er(self):
        g = erdos_renyi(1000, 0.01, 4)
        s = random_walk_subgraph(g, 10, 5)
        assert len(s) == 10
        assert is_connected(g, s)

    def test_component_too_small(self):
        g = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(ValueError, match="component"):
            random_walk_subgraph(g, 3, 0)

    def test_deterministic(self):
        g = erdos_renyi(300, 0.02, 8)
        assert random_walk_subgraph(g, 12, 7) == random_walk_subgraph(g, 12, 7)


class TestIsConnected:
    def test_path_segment(self):
        assert is_connected(path_graph(5), frozenset({0, 1, 2}))

    def test_path_gap(self):
        assert not is_connected(path_graph(5), frozenset({0, 2}))

    def test_clique_subsets(self):
        g = complete_graph(5)
        assert is_connected(g, frozenset({0, 2, 4}))
        assert is_connected(g, frozenset(range(5)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            is_connected(path_graph(3), frozenset())


def test_connected_components():
    g = Graph(5, [(0, 1), (2, 3)])
    comp, sizes = connected_components(g)
    assert sorted(sizes.tolist()) == [1, 2, 2]
    assert comp[0] == comp[1] and comp[2] == comp[3] and comp[4] not in (comp[0], comp[2])


def test_induced_subgraph_preserves_labels():
    g = load_edge_list("a b\nb c\nc d\nd a")
    sub, ids = induced_subgraph(g, [0, 1, 2])
    assert sub.node_count == 3 and sub.edge_count == 2
    assert sub.labels == ["a", "b", "c"]
    assert ids.tolist() == [0, 1, 2]
