"""Undirected simple graph: construction, edge-list ingestion, random generation, sampling."""

from __future__ import annotations

import hashlib
import math
from typing import IO, Iterable, Optional, Sequence

import numpy as np

NodeSet = frozenset


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list or p-value input, with a line number."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class Graph:
    """Immutable undirected simple graph over dense node ids 0..n-1.

    Adjacency is stored in CSR form (``indptr``/``indices``) with each
    neighbor list sorted ascending.  ``labels`` maps dense ids back to the
    external string labels seen at load time (identity for generated graphs).
    Instances are safe to share across worker processes.
    """

    __slots__ = ("indptr", "indices", "labels", "_label_to_id", "_fingerprint")

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]],
                 labels: Optional[Sequence[str]] = None):
        if node_count < 1:
            raise ValueError("graph must have at least one node")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError("edges must be (u, v) pairs")
        if e.size and (e.min() < 0 or e.max() >= node_count):
            raise ValueError("edge endpoint out of range")
        # symmetrize, drop self-loops, dedupe
        keep = e[:, 0] != e[:, 1]
        e = e[keep]
        both = np.concatenate([e, e[:, ::-1]], axis=0)
        if both.size:
            both = np.unique(both, axis=0)
        u, v = both[:, 0], both[:, 1]
        counts = np.bincount(u, minlength=node_count)
        self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.indices = v.copy()  # np.unique sorted lexicographically: per-row ascending
        if labels is not None:
            if len(labels) != node_count:
                raise ValueError("labels length must equal node count")
            self.labels = list(labels)
        else:
            self.labels = [str(i) for i in range(node_count)]
        self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}
        self._fingerprint = None

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def id_of(self, label: str) -> int:
        return self._label_to_id[label]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return i < len(nb) and nb[i] == v

    def edges(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v."""
        u = np.repeat(np.arange(self.node_count), np.diff(self.indptr))
        mask = u < self.indices
        return np.stack([u[mask], self.indices[mask]], axis=1)

    def fingerprint(self) -> str:
        """Content hash of the (label-free) edge structure, for table reuse checks."""
        if self._fingerprint is None:
            h = hashlib.sha256()
            h.update(f"n={self.node_count}\n".encode())
            h.update(self.edges().astype("<i8").tobytes())
            self._fingerprint = h.hexdigest()
        return self._fingerprint

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


def load_edge_list(stream: IO[str] | str) -> Graph:
    """Parse a SNAP-style edge list ('#' comments, two whitespace-separated tokens per line).

    Labels are assigned dense ids in first-appearance order.  Duplicate edges and
    self-loops are silently dropped; directed inputs are symmetrized.  Raises
    EdgeListParseError for malformed lines (with line number) and for empty input.
    """
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = stream.read().splitlines()
    labels: list[str] = []
    label_to_id: dict[str, int] = {}
    edges: list[tuple[int, int]] = []

    def intern(tok: str) -> int:
        i = label_to_id.get(tok)
        if i is None:
            i = len(labels)
            label_to_id[tok] = i
            labels.append(tok)
        return i

    saw_data = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise EdgeListParseError(f"expected 2 tokens, got {len(toks)}", lineno)
        saw_data = True
        edges.append((intern(toks[0]), intern(toks[1])))
    if not saw_data:
        raise EdgeListParseError("empty edge list input")
    return Graph(len(labels), edges, labels=labels)


def serialize_edge_list(g: Graph) -> str:
    """Inverse of load_edge_list up to edge order.

    A preamble of self-loop lines registers every label in dense-id order
    (self-loops are dropped on load), so reloading reproduces the same dense
    ids and fingerprint, and isolated nodes survive the round trip.
    """
    out = ["# node registration preamble (self-loops are dropped on load)"]
    for lab in g.labels:
        out.append(f"{lab} {lab}")
    for u, v in g.edges():
        out.append(f"{g.labels[u]} {g.labels[v]}")
    return "\n".join(out) + "\n"


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) random graph; each unordered pair included independently with probability p.

    Uses geometric gap sampling over the linearized lower triangle, so the cost is
    O(n + m) and the result is bit-identical for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0 or n == 1:
        return Graph(n, [])
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    # row v holds pairs (v, w) for w < v; cumulative row ends for index -> pair mapping
    row_end = np.cumsum(np.arange(1, n, dtype=np.int64))
    positions: list[np.ndarray] = []
    pos = -1
    mean_gap = 1.0 / p
    while pos < total:
        batch = max(1024, int((total - pos) / mean_gap * 1.2))
        gaps = rng.geometric(p, size=batch).astype(np.int64)
        pts = pos + np.cumsum(gaps)
        pos = int(pts[-1])
        positions.append(pts)
    pts = np.concatenate(positions)
    pts = pts[pts < total]
    v = np.searchsorted(row_end, pts, side="right") + 1
    w = pts - np.concatenate([[0], row_end])[v - 1]
    return Graph(n, np.stack([v, w], axis=1))


def connected_components(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Component id per node plus component sizes (BFS)."""
    n = g.node_count
    comp = np.full(n, -1, dtype=np.int64)
    sizes = []
    cur = 0
    for start in range(n):
        if comp[start] >= 0:
            continue
        frontier = [start]
        comp[start] = cur
        count = 1
        while frontier:
            nxt = []
            for u in frontier:
                for v in g.neighbors(u):
                    v = int(v)
                    if comp[v] < 0:
                        comp[v] = cur
                        count += 1
                        nxt.append(v)
            frontier = nxt
        sizes.append(count)
        cur += 1
    return comp, np.asarray(sizes, dtype=np.int64)


def random_walk_subgraph(g: Graph, size: int, seed: int) -> NodeSet:
    """Connected node set of exactly `size` nodes collected by a simple random walk.

    The walk starts at a uniformly random node (re-drawn until it lands in a
    component of at least `size` nodes), steps to a uniformly random neighbor,
    and collects distinct visited nodes.  If the walk sits at a node whose
    neighbors are all collected, it restarts from a uniformly random collected
    node.  Deterministic per seed.
    """
    if size < 1:
        raise ValueError("size must be positive")
    if size > g.node_count:
        raise ValueError("size exceeds node count")
    comp, csizes = connected_components(g)
    if csizes.max() < size:
        raise ValueError(f"no connected component has {size} nodes")
    rng = np.random.default_rng(seed)
    while True:
        start = int(rng.integers(g.node_count))
        if csizes[comp[start]] >= size:
            break
    collected = {start}
    order = [start]
    cur = start
    while len(collected) < size:
        nbrs = g.neighbors(cur)
        stalled = True
        for v in nbrs:
            if int(v) not in collected:
                stalled = False
                break
        if stalled:
            cur = order[int(rng.integers(len(order)))]
            continue
        cur = int(nbrs[int(rng.integers(len(nbrs)))])
        if cur not in collected:
            collected.add(cur)
            order.append(cur)
    return frozenset(collected)


def is_connected(g: Graph, s: NodeSet) -> bool:
    """True iff the subgraph induced on s is connected (BFS within s)."""
    if not s:
        raise ValueError("node set is empty")
    members = set(int(v) for v in s)
    for v in members:
        if v < 0 or v >= g.node_count:
            raise ValueError(f"node id {v} out of range")
    start = next(iter(members))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.neighbors(u):
                v = int(v)
                if v in members and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(seen) == len(members)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph induced on `keep`; returns (graph, original-id array per new id)."""
    keep_ids = np.asarray(sorted(set(int(v) for v in keep)), dtype=np.int64)
    if keep_ids.size == 0:
        raise ValueError("cannot induce an empty subgraph")
    if keep_ids[0] < 0 or keep_ids[-1] >= g.node_count:
        raise ValueError("node id out of range")
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[keep_ids] = np.arange(keep_ids.size)
    e = g.edges()
    mask = (remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)
    new_edges = remap[e[mask]]
    labels = [g.labels[int(i)] for i in keep_ids]
    return Graph(keep_ids.size, new_edges, labels=labels), keep_ids
