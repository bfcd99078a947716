import numpy as np
import pytest

from calscan.graph import Graph, erdos_renyi, is_connected
from calscan.merge import FrontierTable, frontier_interpolate, greedy_merge
from calscan.signals import null_pvalues

from _oracles import brute_max_sig_counts


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


class TestGreedyMergeExamples:
    def test_p5_spec_example(self):
        g = path_graph(5)
        p = np.array([0.005, 0.5, 0.008, 0.6, 0.7])
        f = greedy_merge(g, p, 0.01, record_sets=True)
        assert list(zip(f.sizes.tolist(), f.counts.tolist())) == [(1, 1), (3, 2)]
        assert f.members == [frozenset({0}), frozenset({0, 1, 2})]
        # brute force agrees: max counts per size are 1,1,2,2,2
        best = brute_max_sig_counts(g, p <= 0.01)
        assert [best[i] for i in range(1, 6)] == [1, 1, 2, 2, 2]

    def test_all_nonsignificant(self):
        g = path_graph(5)
        f = greedy_merge(g, np.full(5, 0.9), 0.01, record_sets=True)
        assert f.sizes.tolist() == [1] and f.counts.tolist() == [0]

    def test_k4_initial_contraction(self):
        g = complete_graph(4)
        f = greedy_merge(g, np.array([0.001, 0.002, 0.5, 0.6]), 0.01, record_sets=True)
        pairs = set(zip(f.sizes.tolist(), f.counts.tolist()))
        assert (2, 2) in pairs
        idx = f.sizes.tolist().index(2)
        assert f.members[idx] == frozenset({0, 1})

    def test_alpha_validated(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            greedy_merge(g, np.full(3, 0.5), 0.0)

    def test_aggregate_mode_matches_unit_weights(self):
        g = erdos_renyi(40, 0.1, 3)
        p = null_pvalues(40, 4)
        alpha = 0.2
        f1 = greedy_merge(g, p, alpha)
        f2 = greedy_merge(g, None, alpha,
                          node_sizes=np.ones(40, dtype=np.int64),
                          node_sig_counts=(p <= alpha).astype(np.int64))
        assert np.array_equal(f1.sizes, f2.sizes)
        assert np.array_equal(f1.counts, f2.counts)


class TestFrontierProperties:
    def test_ratio_strictly_decreasing_and_sound(self):
        rng = np.random.default_rng(0)
        for trial in range(60):
            n = int(rng.integers(4, 13))
            g = erdos_renyi(n, float(rng.uniform(0.15, 0.7)), int(rng.integers(10 ** 6)))
            p = 1.0 - rng.random(n)
            for alpha in (0.05, 0.2, 0.5):
                f = greedy_merge(g, p, alpha, record_sets=True)
                sizes = f.sizes.tolist()
                counts = f.counts.tolist()
                assert sizes == sorted(set(sizes))
                ratios = [c / s for c, s in zip(counts, sizes)]
                assert all(b < a for a, b in zip(ratios, ratios[1:]))
                best = brute_max_sig_counts(g, p <= alpha)
                for s, c, mem in zip(sizes, counts, f.members):
                    assert c <= best[s]
                    assert len(mem) == s
                    assert sum(1 for v in mem if p[v] <= alpha) == c
                    assert is_connected(g, mem)

    def test_deterministic(self):
        g = erdos_renyi(60, 0.08, 5)
        p = null_pvalues(60, 6)
        f1 = greedy_merge(g, p, 0.1, record_sets=True)
        f2 = greedy_merge(g, p, 0.1, record_sets=True)
        assert np.array_equal(f1.sizes, f2.sizes)
        assert np.array_equal(f1.counts, f2.counts)
        assert f1.members == f2.members

    def test_disconnected_graph_no_cross_component_sets(self):
        g = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        p = np.array([0.001, 0.9, 0.9, 0.002, 0.003, 0.9])
        f = greedy_merge(g, p, 0.01, record_sets=True)
        for mem in f.members:
            assert is_connected(g, mem)


class TestInterpolate:
    def test_linear_and_flat(self):
        f = FrontierTable(0.01, np.array([1, 3]), np.array([1, 2]), None)
        assert frontier_interpolate(f, 5).tolist() == [1.0, 1.5, 2.0, 2.0, 2.0]

    def test_single_entry_clipped(self):
        f = FrontierTable(0.01, np.array([4]), np.array([3]), None)
        assert frontier_interpolate(f, 6).tolist() == [1.0, 2.0, 3.0, 3.0, 3.0, 3.0]

    def test_full_coverage_identity(self):
        f = FrontierTable(0.01, np.array([1, 2, 3]), np.array([1, 1, 1]), None)
        assert frontier_interpolate(f, 3).tolist() == [1.0, 1.0, 1.0]

    def test_empty_rejected(self):
        f = FrontierTable(0.01, np.array([], dtype=int), np.array([], dtype=int), None)
        with pytest.raises(ValueError):
            frontier_interpolate(f, 3)


@pytest.mark.slow
def test_runtime_scaling():
    """Empirical runtime grows no worse than C * n * log(n) on ER(n, 10/n)."""
    import time
    norms = {}
    for n in (1000, 10_000, 100_000):
        g = erdos_renyi(n, 10.0 / n, 1)
        p = null_pvalues(n, 2)
        best = float("inf")
        reps = 3 if n <= 10_000 else 1
        for _ in range(reps):
            t0 = time.perf_counter()
            greedy_merge(g, p, 0.05, record_sets=False)
            best = min(best, time.perf_counter() - t0)
        norms[n] = best / (n * np.log2(n))
    base = norms[1000]
    assert norms[10_000] <= 3.0 * base, norms
    assert norms[100_000] <= 3.0 * base, norms
