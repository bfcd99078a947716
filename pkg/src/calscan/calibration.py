"""Estimation of the expected maximum significant-node proportion surface.

The calibration surface maps (subgraph size N, significance level alpha) to
the expected maximum proportion of significant nodes over all connected
subgraphs of size N under the null, estimated by randomization testing over K
independent replica p-value draws on the fixed graph structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import coretree as ct
from .graph import Graph
from .merge import frontier_interpolate, greedy_merge
from .parallel import ordered_map
from .scores import kl_one_sided_array
from .signals import null_pvalues

DEFAULT_GRID_VALUES = tuple(i / 1000 for i in range(1, 10)) + tuple(i / 100 for i in range(1, 10))


class TableFormatError(ValueError):
    """Calibration table file is malformed."""


class TableMismatchError(ValueError):
    """Calibration table does not apply to the given graph or grid."""


@dataclass(frozen=True)
class AlphaGrid:
    """Strictly increasing significance thresholds in (0, 1)."""

    values: tuple = DEFAULT_GRID_VALUES

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("alpha grid is empty")
        if any(not (0.0 < v < 1.0) for v in vals):
            raise ValueError("alpha grid values must lie in (0, 1)")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("alpha grid must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def default(cls, alpha_max: Optional[float] = None) -> "AlphaGrid":
        vals = DEFAULT_GRID_VALUES
        if alpha_max is not None:
            vals = tuple(v for v in vals if v <= alpha_max)
        return cls(vals)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def index(self, alpha: float) -> int:
        try:
            return self.values.index(float(alpha))
        except ValueError:
            raise TableMismatchError(f"alpha={alpha} not in grid") from None

    def issubset(self, other: "AlphaGrid") -> bool:
        return set(self.values).issubset(other.values)


@dataclass
class CalibrationTable:
    """Expected-maximum-proportion surface with provenance and per-cell noise.

    values[N-1, j] holds the surface for subgraph size N at grid alpha j;
    stderr carries the standard error of the randomization mean (zeros for
    closed-form provenance).
    """

    graph_fingerprint: str
    grid: AlphaGrid
    n_max: int
    values: np.ndarray
    stderr: np.ndarray
    replica_count: int
    provenance: str
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (self.n_max, len(self.grid))
        if self.values.shape != expected or self.stderr.shape != expected:
            raise ValueError("table arrays must be (n_max, len(grid))")
        if self.provenance not in ("randomization", "lower_bound", "none"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def alpha_prime(self, n: int, alpha: float) -> float:
        if not (1 <= n <= self.n_max):
            raise ValueError(f"subgraph size {n} outside 1..{self.n_max}")
        return float(self.values[n - 1, self.grid.index(alpha)])

    def column(self, alpha: float) -> np.ndarray:
        return self.values[:, self.grid.index(alpha)]

    def stderr_column(self, alpha: float) -> np.ndarray:
        return self.stderr[:, self.grid.index(alpha)]

    def check_graph(self, g: Graph) -> None:
        if g.fingerprint() != self.graph_fingerprint:
            raise TableMismatchError(
                "calibration table fingerprint does not match the graph")

    def save(self, path) -> None:
        path = Path(path)
        with path.open("w") as fh:
            fh.write("# calscan calibration table\n")
            fh.write(f"# fingerprint={self.graph_fingerprint}\n")
            fh.write(f"# provenance={self.provenance}\n")
            fh.write(f"# K={self.replica_count}\n")
            fh.write(f"# n_max={self.n_max}\n")
            fh.write("# grid=" + ",".join(f"{a:.17g}" for a in self.grid) + "\n")
            fh.write("# notes=" + json.dumps(self.notes, sort_keys=True) + "\n")
            fh.write("N,alpha,alpha_prime,stderr\n")
            for i in range(self.n_max):
                for j, a in enumerate(self.grid):
                    fh.write(f"{i + 1},{a:.17g},{self.values[i, j]:.17g},"
                             f"{self.stderr[i, j]:.17g}\n")

    @classmethod
    def load(cls, path, expected_graph: Optional[Graph] = None) -> "CalibrationTable":
        path = Path(path)
        header: dict[str, str] = {}
        rows = []
        with path.open() as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("#"):
                    body = line[1:].strip()
                    if "=" in body:
                        k, v = body.split("=", 1)
                        header[k.strip()] = v
                    continue
                if not line or line.startswith("N,"):
                    continue
                rows.append(line)
        for key in ("fingerprint", "provenance", "K", "n_max", "grid"):
            if key not in header:
                raise TableFormatError(f"missing header field {key!r}")
        try:
            n_max = int(header["n_max"])
            k = int(header["K"])
            grid = AlphaGrid(tuple(float(x) for x in header["grid"].split(",")))
        except ValueError as exc:
            raise TableFormatError(f"bad header: {exc}") from None
        notes = json.loads(header.get("notes", "{}"))
        values = np.full((n_max, len(grid)), np.nan)
        stderr = np.full((n_max, len(grid)), np.nan)
        for row in rows:
            parts = row.split(",")
            if len(parts) != 4:
                raise TableFormatError(f"bad row {row!r}")
            try:
                n = int(parts[0])
                a = float(parts[1])
                j = grid.index(a)
                if not (1 <= n <= n_max):
                    raise ValueError(f"N={n} out of range")
                values[n - 1, j] = float(parts[2])
                stderr[n - 1, j] = float(parts[3])
            except (ValueError, TableMismatchError) as exc:
                raise TableFormatError(
                    f"bad value at N={parts[0]}, alpha={parts[1]}: {exc}") from None
        if np.isnan(values).any():
            i, j = np.argwhere(np.isnan(values))[0]
            raise TableFormatError(
                f"missing cell at N={i + 1}, alpha={grid.values[j]:g}")
        table = cls(graph_fingerprint=header["fingerprint"], grid=grid, n_max=n_max,
                    values=values, stderr=stderr, replica_count=k,
                    provenance=header["provenance"], notes=notes)
        if expected_graph is not None:
            table.check_graph(expected_graph)
        return table


def uncalibrated_table(g: Graph, grid: AlphaGrid) -> CalibrationTable:
    """Identity surface (every cell equals alpha): scoring against it reproduces
    the uncalibrated scan."""
    n = g.node_count
    values = np.tile(np.asarray(grid.values), (n, 1))
    return CalibrationTable(graph_fingerprint=g.fingerprint(), grid=grid, n_max=n,
                            values=values, stderr=np.zeros_like(values),
                            replica_count=0, provenance="none")


# --- randomization calibration ------------------------------------------------

_WORKER_CTX: dict = {}


def _init_replica_worker(g: Graph, grid_values: tuple, decomposition) -> None:
    _WORKER_CTX["g"] = g
    _WORKER_CTX["grid"] = grid_values
    _WORKER_CTX["dec"] = decomposition


def replica_max_counts(seed: int, g: Graph, grid_values: Sequence[float],
                       decomposition=None) -> np.ndarray:
    """Dense estimated max significant-node counts for one null replica.

    Returns an array of shape (len(grid), n) where entry [j, N-1] estimates the
    maximum count over connected subgraphs of size N at grid alpha j.  Counts
    are made monotone along the alpha axis, matching the exact statistic's
    monotonicity for a fixed draw.
    """
    n = g.node_count
    p = null_pvalues(n, seed)
    out = np.empty((len(grid_values), n))
    for j, alpha in enumerate(grid_values):
        cg = None
        if decomposition is not None:
            cg = ct.compress_trees(decomposition, p, alpha)
        if cg is None:
            f = greedy_merge(g, p, alpha, record_sets=False)
        else:
            f = greedy_merge(cg.graph, None, alpha, record_sets=False,
                             node_sizes=cg.node_sizes,
                             node_sig_counts=cg.node_sig_counts)
        out[j] = frontier_interpolate(f, n)
    return np.maximum.accumulate(out, axis=0)


def _replica_task(seed: int) -> np.ndarray:
    return replica_max_counts(seed, _WORKER_CTX["g"], _WORKER_CTX["grid"],
                              _WORKER_CTX["dec"])


def calibrate_randomization(g: Graph, grid: AlphaGrid, k_replicas: int,
                            base_seed: int, workers: Optional[int] = None,
                            use_coretree: bool = False,
                            coretree_d: int = 1) -> CalibrationTable:
    """Estimate the surface from K null replicas with seeds base_seed..base_seed+K-1.

    Replica work is embarrassingly parallel; the mean/stderr reduction folds
    results in replica order, so the table is bit-identical for any worker
    count.  With use_coretree the same compressed search used for detection is
    applied to every replica.
    """
    if k_replicas < 1:
        raise ValueError("k_replicas must be positive")
    n = g.node_count
    dec = None
    if use_coretree:
        dec = ct.core_tree_decompose(g, coretree_d)
        if not dec.core_mask.any():
            dec = None
    seeds = [base_seed + r for r in range(k_replicas)]
    total = np.zeros((len(grid), n))
    total_sq = np.zeros((len(grid), n))
    for counts in ordered_map(_replica_task, seeds, workers=workers,
                              initializer=_init_replica_worker,
                              initargs=(g, grid.values, dec)):
        ratios = counts / np.arange(1, n + 1)
        total += ratios
        total_sq += ratios * ratios
    mean = total / k_replicas
    if k_replicas > 1:
        var = (total_sq - k_replicas * mean * mean) / (k_replicas - 1)
        stderr = np.sqrt(np.maximum(var, 0.0) / k_replicas)
    else:
        stderr = np.zeros_like(mean)
    notes = {"base_seed": base_seed}
    if use_coretree:
        notes["coretree_d"] = coretree_d
    return CalibrationTable(graph_fingerprint=g.fingerprint(), grid=grid, n_max=n,
                            values=mean.T.copy(), stderr=stderr.T.copy(),
                            replica_count=k_replicas, provenance="randomization",
                            notes=notes)


# --- held-out null score diagnostics -------------------------------------------


@dataclass
class NullScoreCheck:
    """Distribution of calibrated scores on held-out null replicas."""

    replica_max: np.ndarray       # max over (N, alpha) per replica
    cell_mean: np.ndarray         # mean score per (N, alpha) cell
    predicted_cell: np.ndarray    # 0.5 / (1 - alpha_ref), nan where alpha_ref == 1

    @property
    def mean_max(self) -> float:
        return float(self.replica_max.mean())

    @property
    def p95_max(self) -> float:
        return float(np.percentile(self.replica_max, 95))


def calibrated_null_score_check(g: Graph, table: CalibrationTable, grid: AlphaGrid,
                                holdout_seeds: Sequence[int],
                                workers: Optional[int] = None) -> NullScoreCheck:
    """Score held-out null replicas against the table with the calibrated
    Berk-Jones statistic; the seeds must be disjoint from the table's."""
    table.check_graph(g)
    if not grid.issubset(table.grid):
        raise TableMismatchError("requested grid not covered by the table")
    n = g.node_count
    cols = [table.grid.index(a) for a in grid]
    alpha_ref = np.maximum(table.values[:, cols].T, np.asarray(grid.values)[:, None])
    sizes = np.arange(1, n + 1, dtype=float)
    replica_max = []
    cell_sum = np.zeros((len(grid), n))
    count = 0
    for counts in ordered_map(_replica_task, list(holdout_seeds), workers=workers,
                              initializer=_init_replica_worker,
                              initargs=(g, grid.values, None)):
        ratios = counts / sizes
        scores = sizes * kl_one_sided_array(ratios, alpha_ref)
        replica_max.append(float(scores.max()))
        cell_sum += scores
        count += 1
    with np.errstate(divide="ignore"):
        predicted = np.where(alpha_ref < 1.0, 0.5 / (1.0 - alpha_ref), np.nan)
    return NullScoreCheck(replica_max=np.asarray(replica_max),
                          cell_mean=cell_sum / max(count, 1),
                          predicted_cell=predicted)
