"""Closed-form lower bounds on the expected maximum significant-node proportion.

Two bounds replace randomization testing: a neighborhood-analysis bound built
from greedy exterior-degree profiles (valid on any graph), and a percolation
bound (valid on Erdos-Renyi graphs, usable elsewhere with a recorded warning).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calibration import AlphaGrid, CalibrationTable
from .graph import Graph


@dataclass
class ExtDegreeProfile:
    """Greedy lower estimates of the largest exterior degree per subgraph size.

    ext_degree[c-1] is the exterior degree (edges leaving the set) of the
    greedily grown connected set of size c; nodes holds the growth order, so
    nodes[:c] is the subgraph behind ext_degree[c-1].
    """

    ext_degree: np.ndarray
    nodes: np.ndarray

    def __len__(self) -> int:
        return len(self.ext_degree)


def ext_degree_profile(g: Graph) -> ExtDegreeProfile:
    """Grow greedily from the max-degree node, always adding the neighbor with
    the most neighbors outside the set; ties break to the lowest node id.

    The growth cannot leave the start node's component; sizes beyond it carry
    no estimate (the neighborhood bound falls back to the alpha floor there).
    """
    n = g.node_count
    degrees = g.degrees
    start = int(np.lexsort((np.arange(n), -degrees))[0])
    in_set = np.zeros(n, dtype=bool)
    # outside_deg[v]: neighbors of v not in the set; maintained incrementally
    outside_deg = degrees.astype(np.int64).copy()
    boundary: set[int] = set()
    order = []
    ext = []
    cur_ext = 0
    v = start
    while True:
        in_set[v] = True
        order.append(v)
        boundary.discard(v)
        # ext(S + v) = ext(S) + outside_deg(v) - edges(v -> S)
        cur_ext += 2 * int(outside_deg[v]) - int(degrees[v])
        ext.append(cur_ext)
        for u in g.neighbors(v):
            u = int(u)
            outside_deg[u] -= 1
            if not in_set[u]:
                boundary.add(u)
        if not boundary:
            break
        cand = np.fromiter(boundary, dtype=np.int64, count=len(boundary))
        keys = outside_deg[cand] * np.int64(n) + (np.int64(n) - 1 - cand)
        v = int(cand[np.argmax(keys)])
    return ExtDegreeProfile(ext_degree=np.asarray(ext, dtype=np.int64),
                            nodes=np.asarray(order, dtype=np.int64))


def lower_bound_neighborhood(profile: ExtDegreeProfile, n_value: int,
                             alpha: float) -> float:
    """Neighborhood bound: max over c with c <= N <= c + k_c of
    (c*alpha + min(k_c*alpha, N - c)) / N, floored at alpha."""
    if n_value < 1:
        raise ValueError("subgraph size must be positive")
    best = alpha
    for c_idx in range(len(profile)):
        c = c_idx + 1
        k = int(profile.ext_degree[c_idx])
        if c <= n_value <= c + k:
            val = (c * alpha + min(k * alpha, n_value - c)) / n_value
            if val > best:
                best = val
    return min(best, 1.0)


def lower_bound_percolation(n_nodes: int, p_edge: float, n_value: int,
                            alpha: float) -> float:
    """Percolation bound: min(1, (alpha*|V|/N) * (1 - exp(-<k> N / |V|))) with
    <k> = (|V| - 1) * p_edge."""
    if n_value < 1:
        raise ValueError("subgraph size must be positive")
    mean_deg = (n_nodes - 1) * p_edge
    return min(1.0, (alpha * n_nodes / n_value)
               * (1.0 - math.exp(-mean_deg * n_value / n_nodes)))


def _neighborhood_curves(profile: ExtDegreeProfile, grid: AlphaGrid,
                         n_max: int) -> np.ndarray:
    """Vectorized neighborhood bound for all (N, alpha) cells."""
    alphas = np.asarray(grid.values)
    out = np.tile(alphas, (n_max, 1))
    ns = np.arange(1, n_max + 1, dtype=float)
    for c_idx in range(len(profile)):
        c = c_idx + 1
        k = int(profile.ext_degree[c_idx])
        hi = min(c + k, n_max)
        if c > n_max:
            break
        window = ns[c - 1:hi]
        vals = (c * alphas[None, :] +
                np.minimum(k * alphas[None, :], (window - c)[:, None])) / window[:, None]
        np.maximum(out[c - 1:hi], vals, out=out[c - 1:hi])
    return np.minimum(out, 1.0)


def bound_table(g: Graph, grid: AlphaGrid,
                er_params: tuple[int, float] | None = None) -> CalibrationTable:
    """Combined table: per cell the max of the alpha floor and both bounds.

    er_params should be the generating (n, p) of an Erdos-Renyi graph; when
    omitted the empirical (|V|, m / C(|V|, 2)) is used and the table is marked
    with a warning note, since the percolation bound is only guaranteed on
    Erdos-Renyi graphs.
    """
    n = g.node_count
    notes: dict = {}
    if er_params is None:
        pairs = n * (n - 1) / 2
        p_emp = g.edge_count / pairs if pairs else 0.0
        er_params = (n, p_emp)
        notes["er_params"] = "empirical"
        notes["er_params_warning"] = ("percolation bound computed from empirical "
                                      "density; only guaranteed on Erdos-Renyi graphs")
    else:
        notes["er_params"] = f"{er_params[0]},{er_params[1]:.17g}"
    profile = ext_degree_profile(g)
    values = _neighborhood_curves(profile, grid, n)
    alphas = np.asarray(grid.values)
    ns = np.arange(1, n + 1, dtype=float)
    mean_deg = (er_params[0] - 1) * er_params[1]
    perc = (alphas[None, :] * er_params[0] / ns[:, None]) \
        * (1.0 - np.exp(-mean_deg * ns[:, None] / er_params[0]))
    np.maximum(values, np.minimum(perc, 1.0), out=values)
    return CalibrationTable(graph_fingerprint=g.fingerprint(), grid=grid, n_max=n,
                            values=values, stderr=np.zeros_like(values),
                            replica_count=0, provenance="lower_bound", notes=notes)
