"""Core-tree decomposition (degree peeling) and significant-tree-node compression."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import Graph, NodeSet, induced_subgraph


@dataclass
class CoreTreeDecomposition:
    """Split of a graph into a dense core and a low-treewidth periphery.

    Obtained by repeatedly peeling nodes of current degree <= d; for the
    default d=1 the core is the 2-core and every periphery component is a tree
    hanging off the core.  The decomposition is p-value independent, so it is
    computed once per graph and reused across significance levels.
    """

    graph: Graph
    d: int
    core_mask: np.ndarray
    elimination_order: np.ndarray
    core_graph: Optional[Graph] = field(default=None, repr=False)
    core_ids: Optional[np.ndarray] = field(default=None, repr=False)
    _core_index: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def core(self) -> NodeSet:
        return frozenset(np.flatnonzero(self.core_mask).tolist())

    @property
    def periphery(self) -> NodeSet:
        return frozenset(np.flatnonzero(~self.core_mask).tolist())

    def trees(self) -> list[tuple[NodeSet, NodeSet]]:
        """Periphery components with the core nodes they attach to."""
        g = self.graph
        periph = ~self.core_mask
        seen = np.zeros(g.node_count, dtype=bool)
        out = []
        for start in np.flatnonzero(periph):
            start = int(start)
            if seen[start]:
                continue
            seen[start] = True
            comp = [start]
            attach = set()
            frontier = [start]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in g.neighbors(u):
                        v = int(v)
                        if self.core_mask[v]:
                            attach.add(v)
                        elif not seen[v]:
                            seen[v] = True
                            comp.append(v)
                            nxt.append(v)
                frontier = nxt
            out.append((frozenset(comp), frozenset(attach)))
        return out


@dataclass
class CompressedGraph:
    """Core graph with significant periphery nodes absorbed into core nodes.

    node_sizes/node_sig_counts carry the conserved (N, N_alpha) aggregates per
    compressed node; absorbed maps each compressed node to the original ids it
    swallowed.  orig_ids maps compressed ids back to original ids.
    """

    graph: Graph
    orig_ids: np.ndarray
    node_sizes: np.ndarray
    node_sig_counts: np.ndarray
    absorbed: list


def core_tree_decompose(g: Graph, d: int = 1) -> CoreTreeDecomposition:
    """Iteratively peel nodes of current degree <= d; survivors form the core."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = g.node_count
    deg = g.degrees.astype(np.int64).copy()
    removed = np.zeros(n, dtype=bool)
    order: list[int] = []
    queue = [int(v) for v in np.flatnonzero(deg <= d)]
    in_queue = np.zeros(n, dtype=bool)
    in_queue[deg <= d] = True
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        if removed[v]:
            continue
        removed[v] = True
        order.append(v)
        for u in g.neighbors(v):
            u = int(u)
            if removed[u]:
                continue
            deg[u] -= 1
            if deg[u] <= d and not in_queue[u]:
                in_queue[u] = True
                queue.append(u)
    core_mask = ~removed
    dec = CoreTreeDecomposition(graph=g, d=d, core_mask=core_mask,
                                elimination_order=np.asarray(order, dtype=np.int64))
    if core_mask.any():
        core_graph, core_ids = induced_subgraph(g, np.flatnonzero(core_mask))
        dec.core_graph = core_graph
        dec.core_ids = core_ids
        idx = np.full(n, -1, dtype=np.int64)
        idx[core_ids] = np.arange(core_ids.size)
        dec._core_index = idx
    return dec


def compress_trees(dec: CoreTreeDecomposition, p: np.ndarray,
                   alpha: float) -> Optional[CompressedGraph]:
    """Absorb significant periphery nodes into adjacent core nodes.

    Non-significant periphery nodes are dropped, disconnecting (and thereby
    dropping) any significant periphery nodes whose only routes to the core
    pass through them.  Each surviving significant periphery component is
    absorbed whole into its most significant (lowest p-value, then lowest id)
    adjacent core node, matching a breadth-first claim from core nodes
    processed in ascending p-value order.

    Returns None when the core is empty: the scan should then run on the
    original graph unchanged.
    """
    g = dec.graph
    n = g.node_count
    if p.shape != (n,):
        raise ValueError("p-value vector length must equal node count")
    if not dec.core_mask.any():
        return None
    core_ids = dec.core_ids
    core_index = dec._core_index
    absorbed: list[list[int]] = [[] for _ in range(core_ids.size)]

    psig = (~dec.core_mask) & (p <= alpha)
    seen = np.zeros(n, dtype=bool)
    for start in np.flatnonzero(psig):
        start = int(start)
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        attach: list[int] = []
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.neighbors(u):
                    v = int(v)
                    if dec.core_mask[v]:
                        attach.append(v)
                    elif psig[v] and not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        nxt.append(v)
            frontier = nxt
        if not attach:
            continue  # disconnected from the core: dropped
        claim = min(attach, key=lambda c: (p[c], c))
        absorbed[int(core_index[claim])].extend(sorted(comp))

    sizes = np.ones(core_ids.size, dtype=np.int64)
    sig = (p[core_ids] <= alpha).astype(np.int64)
    for ci, members in enumerate(absorbed):
        sizes[ci] += len(members)
        sig[ci] += len(members)
    return CompressedGraph(graph=dec.core_graph, orig_ids=core_ids,
                           node_sizes=sizes, node_sig_counts=sig,
                           absorbed=absorbed)


def expand_result(cg: CompressedGraph, compressed_set: NodeSet) -> NodeSet:
    """Map a compressed-node set back to original node ids (core + absorbed)."""
    out: set[int] = set()
    for ci in compressed_set:
        ci = int(ci)
        if ci < 0 or ci >= cg.orig_ids.size:
            raise ValueError(f"unknown compressed node id {ci}")
        out.add(int(cg.orig_ids[ci]))
        out.update(cg.absorbed[ci])
    return frozenset(out)
