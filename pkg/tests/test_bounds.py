import math

import numpy as np
import pytest

from calscan.bounds import (bound_table, ext_degree_profile,
                            lower_bound_neighborhood, lower_bound_percolation)
from calscan.calibration import AlphaGrid
from calscan.graph import Graph, erdos_renyi, is_connected

from _oracles import brute_max_sig_counts


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def recount_ext_degree(g, nodes):
    s = set(int(v) for v in nodes)
    return sum(1 for u in s for v in g.neighbors(u) if int(v) not in s)


class TestExtDegreeProfile:
    def test_star_center_first(self):
        prof = ext_degree_profile(star_graph(10))
        assert prof.nodes[0] == 0
        assert prof.ext_degree[0] == 10

    def test_k5(self):
        prof = ext_degree_profile(complete_graph(5))
        assert prof.ext_degree[0] == 4
        assert prof.ext_degree[1] == 6  # 2 * 3 edges leave a 2-clique in K5

    def test_p5_interior(self):
        prof = ext_degree_profile(path_graph(5))
        assert prof.ext_degree[0] == 2

    def test_recount_matches(self):
        g = erdos_renyi(60, 0.08, 3)
        prof = ext_degree_profile(g)
        for c in (1, 5, 20, len(prof)):
            nodes = prof.nodes[:c]
            assert recount_ext_degree(g, nodes) == prof.ext_degree[c - 1]
            assert is_connected(g, frozenset(nodes.tolist()))


class TestNeighborhoodBound:
    def test_star_formula(self):
        prof = ext_degree_profile(star_graph(10))
        assert lower_bound_neighborhood(prof, 2, 0.1) == pytest.approx(0.55)

    def test_k5_formula(self):
        prof = ext_degree_profile(complete_graph(5))
        assert lower_bound_neighborhood(prof, 3, 0.5) == pytest.approx(2.5 / 3)

    def test_n1_is_alpha(self):
        prof = ext_degree_profile(path_graph(4))
        assert lower_bound_neighborhood(prof, 1, 0.07) == pytest.approx(0.07)

    def test_fallback_to_alpha(self):
        g = Graph(3, [(0, 1)])  # node 2 isolated; c stops at component edge
        prof = ext_degree_profile(g)
        assert lower_bound_neighborhood(prof, 3, 0.2) == pytest.approx(0.2)

    def test_validity_against_exhaustive_null_mean(self):
        # bound * N <= E[max N_alpha] estimated by exhaustive enumeration
        rng = np.random.default_rng(0)
        for trial in range(25):
            n = int(rng.integers(5, 11))
            g = erdos_renyi(n, float(rng.uniform(0.25, 0.7)), int(rng.integers(10 ** 6)))
            prof = ext_degree_profile(g)
            for alpha in (0.1, 0.3):
                draws = 400
                totals = {k: 0 for k in range(1, n + 1)}
                reachable = set()
                for d in range(draws):
                    p = 1.0 - rng.random(n)
                    best = brute_max_sig_counts(g, p <= alpha)
                    reachable.update(best)
                    for size, cnt in best.items():
                        totals[size] += cnt
                for size in sorted(reachable):
                    emp_mean = totals[size] / draws
                    se = 3 * np.sqrt(size / draws)  # coarse bound on MC noise
                    bound = lower_bound_neighborhood(prof, size, alpha) * size
                    assert bound <= emp_mean + se, (n, alpha, size, bound, emp_mean)


class TestPercolationBound:
    def test_full_size_recovers_alpha(self):
        assert lower_bound_percolation(1000, 0.05, 1000, 0.05) == \
            pytest.approx(0.05, abs=1e-10)

    def test_small_n_saturates(self):
        assert lower_bound_percolation(1000, 0.05, 10, 0.05) == 1.0

    def test_mid_value(self):
        expect = 0.5 * (1 - math.exp(-49.95 * 0.1))
        assert lower_bound_percolation(1000, 0.05, 100, 0.05) == pytest.approx(expect)


class TestBoundTable:
    def test_empty_graph_collapses_to_alpha(self):
        g = Graph(4, [])
        grid = AlphaGrid((0.01, 0.05))
        table = bound_table(g, grid)
        for a in grid:
            assert np.allclose(table.column(a), a)

    def test_clique_exceeds_alpha_midrange(self):
        g = complete_graph(5)
        grid = AlphaGrid((0.2,))
        table = bound_table(g, grid, er_params=(5, 1.0))
        col = table.column(0.2)
        assert (col[1:4] > 0.2).all()  # 1 < N <= 1 + k_c

    def test_floor_at_alpha_everywhere(self):
        g = erdos_renyi(200, 0.03, 5)
        table = bound_table(g, grid=AlphaGrid.default())
        assert (table.values >= np.asarray(table.grid.values)[None, :] - 1e-12).all()
        assert (table.values <= 1.0).all()

    def test_empirical_params_flagged(self):
        g = erdos_renyi(50, 0.1, 6)
        table = bound_table(g, AlphaGrid((0.05,)))
        assert table.notes["er_params"] == "empirical"
        assert "warning" in " ".join(table.notes.keys()) or \
            "er_params_warning" in table.notes

    def test_matches_scalar_functions(self):
        g = erdos_renyi(80, 0.06, 7)
        grid = AlphaGrid((0.01, 0.05, 0.09))
        table = bound_table(g, grid, er_params=(80, 0.06))
        prof = ext_degree_profile(g)
        rng = np.random.default_rng(8)
        for _ in range(60):
            n_val = int(rng.integers(1, 81))
            a = float(rng.choice(grid.values))
            expect = max(a,
                         lower_bound_neighborhood(prof, n_val, a),
                         lower_bound_percolation(80, 0.06, n_val, a))
            assert table.alpha_prime(n_val, a) == pytest.approx(min(expect, 1.0))

    def test_deterministic(self):
        g = erdos_renyi(60, 0.08, 9)
        t1 = bound_table(g, AlphaGrid((0.05,)))
        t2 = bound_table(g, AlphaGrid((0.05,)))
        assert np.array_equal(t1.values, t2.values)
