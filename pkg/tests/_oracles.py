"""Independent brute-force oracles used to validate search results.

These deliberately avoid the library's merge/search code paths: connectivity
and maxima are computed by exhaustive bitmask enumeration.
"""

from __future__ import annotations

import numpy as np


def adjacency_masks(g) -> list[int]:
    n = g.node_count
    adj = [0] * n
    for u in range(n):
        for v in g.neighbors(u):
            adj[u] |= 1 << int(v)
    return adj


def is_connected_mask(mask: int, adj: list[int]) -> bool:
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        nxt = 0
        m = frontier
        while m:
            b = m & -m
            m ^= b
            nxt |= adj[b.bit_length() - 1] & mask & ~seen
        seen |= nxt
        frontier = nxt
    return seen == mask


def brute_max_sig_counts(g, sig: np.ndarray) -> dict[int, int]:
    """Max significant-node count over all connected subgraphs, per size.

    Exhaustive over all 2^n node subsets; n must stay small (<= ~14).
    """
    n = g.node_count
    assert n <= 14, "oracle is exponential; keep graphs small"
    adj = adjacency_masks(g)
    sig_mask = 0
    for i in range(n):
        if sig[i]:
            sig_mask |= 1 << i
    best: dict[int, int] = {}
    for mask in range(1, 1 << n):
        if not is_connected_mask(mask, adj):
            continue
        size = bin(mask).count("1")
        count = bin(mask & sig_mask).count("1")
        if count > best.get(size, -1):
            best[size] = count
    return best
