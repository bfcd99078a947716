"""End-to-end detection pipeline: calibrated scan, significance testing, and
repeated single-cluster detection."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Callable, Optional, Sequence

import numpy as np

from . import coretree as ct
from .calibration import AlphaGrid, CalibrationTable, TableMismatchError
from .graph import Graph, NodeSet, induced_subgraph, is_connected
from .merge import greedy_merge
from .parallel import ordered_map
from .scores import STATISTICS, calibrated_score
from .signals import null_pvalues


@dataclass
class DetectionResult:
    """Highest-scoring connected subgraph with its chosen level and score."""

    subgraph: NodeSet
    alpha_star: float
    n: int
    n_alpha: int
    score: float
    statistic: str
    table_provenance: str
    null_scores: Optional[np.ndarray] = None
    significance_p: Optional[float] = None
    seeds: dict = field(default_factory=dict)


def detect(g: Graph, p: np.ndarray, table: CalibrationTable, grid: AlphaGrid,
           statistic: str = "cbj", use_coretree: bool = False,
           coretree_d: int = 1,
           _decomposition: Optional[ct.CoreTreeDecomposition] = None) -> DetectionResult:
    """Scan every grid level, score all frontier subgraphs against the table,
    and return the argmax (ties: smaller size, then smaller alpha)."""
    if statistic not in STATISTICS:
        raise ValueError(f"statistic must be one of {STATISTICS}")
    table.check_graph(g)
    if not grid.issubset(table.grid):
        raise TableMismatchError("requested grid not covered by the table")
    p = np.asarray(p, dtype=float)
    dec = _decomposition
    if use_coretree and dec is None:
        dec = ct.core_tree_decompose(g, coretree_d)

    best = None  # (score, n, alpha, min_member, subgraph, n_alpha)
    for alpha in grid:
        cg = None
        if use_coretree and dec is not None and dec.core_mask.any():
            cg = ct.compress_trees(dec, p, alpha)
        if cg is None:
            f = greedy_merge(g, p, alpha, record_sets=True)
            expand = None
        else:
            f = greedy_merge(cg.graph, None, alpha, record_sets=True,
                             node_sizes=cg.node_sizes,
                             node_sig_counts=cg.node_sig_counts)
            expand = cg
        for size, count, mem in zip(f.sizes, f.counts, f.members):
            size, count = int(size), int(count)
            score = calibrated_score(statistic, alpha, count, size,
                                     table.alpha_prime(size, alpha))
            key = (-score, size, alpha, min(mem))
            if best is None or key < best[0]:
                subgraph = ct.expand_result(expand, mem) if expand is not None \
                    else frozenset(int(v) for v in mem)
                best = (key, score, alpha, size, count, subgraph)
    _, score, alpha_star, size, count, subgraph = best
    return DetectionResult(subgraph=subgraph, alpha_star=alpha_star, n=size,
                           n_alpha=count, score=score, statistic=statistic,
                           table_provenance=table.provenance)


_NULL_CTX: dict = {}


def _init_null_worker(g, table, grid, statistic, use_coretree, coretree_d) -> None:
    _NULL_CTX["args"] = (g, table, grid, statistic, use_coretree, coretree_d)
    _NULL_CTX["dec"] = ct.core_tree_decompose(g, coretree_d) if use_coretree else None


def _null_detect_task(seed: int) -> float:
    g, table, grid, statistic, use_coretree, coretree_d = _NULL_CTX["args"]
    p = null_pvalues(g.node_count, seed)
    res = detect(g, p, table, grid, statistic, use_coretree, coretree_d,
                 _decomposition=_NULL_CTX["dec"])
    return res.score


def null_max_scores(g: Graph, table: CalibrationTable, grid: AlphaGrid,
                    statistic: str, replica_count: int, base_seed: int,
                    workers: Optional[int] = None, use_coretree: bool = False,
                    coretree_d: int = 1) -> np.ndarray:
    """Max detection scores on replica_count null replicas (seeds base_seed+r).

    The seeds must be disjoint from the ones that built the calibration table.
    """
    if replica_count < 1:
        raise ValueError("replica_count must be positive")
    seeds = [base_seed + r for r in range(replica_count)]
    scores = list(ordered_map(_null_detect_task, seeds, workers=workers,
                              initializer=_init_null_worker,
                              initargs=(g, table, grid, statistic,
                                        use_coretree, coretree_d)))
    return np.asarray(scores)


def empirical_significance(observed_score: float, null_scores: np.ndarray) -> float:
    """(1 + #{replica max >= observed}) / (1 + R)."""
    r = len(null_scores)
    if r < 1:
        raise ValueError("need at least one replica score")
    return float((1 + int((null_scores >= observed_score).sum())) / (1 + r))


def significance_test(observed: DetectionResult, g: Graph, table: CalibrationTable,
                      grid: AlphaGrid, statistic: str, replica_count: int,
                      base_seed: int, workers: Optional[int] = None,
                      use_coretree: bool = False, coretree_d: int = 1) -> DetectionResult:
    """Attach an empirical p-value from replica max scores to a detection."""
    nulls = null_max_scores(g, table, grid, statistic, replica_count, base_seed,
                            workers=workers, use_coretree=use_coretree,
                            coretree_d=coretree_d)
    pval = empirical_significance(observed.score, nulls)
    seeds = dict(observed.seeds)
    seeds["significance_base_seed"] = base_seed
    return replace(observed, null_scores=nulls, significance_p=pval, seeds=seeds)


def detect_multiple(g: Graph, p: np.ndarray, table: CalibrationTable, grid: AlphaGrid,
                    statistic: str = "cbj", max_clusters: int = 3,
                    significance_threshold: float = 0.05,
                    removal_mode: str = "pvalue_one", replica_count: int = 99,
                    base_seed: int = 0, workers: Optional[int] = None,
                    use_coretree: bool = False, coretree_d: int = 1,
                    recalibrate: Optional[Callable[[Graph], CalibrationTable]] = None,
                    ) -> list[DetectionResult]:
    """Repeated single-cluster detection.

    After each significant detection the cluster is removed, either by setting
    its p-values to 1 (keeps the graph and table valid; overlaps allowed) or by
    deleting its nodes, which invalidates the calibration fingerprint and
    therefore requires a recalibrate callback producing a fresh table for the
    reduced graph.  Stops at the first non-significant detection or after
    max_clusters significant ones.  Results are reported in original node ids.
    """
    if max_clusters < 1:
        raise ValueError("max_clusters must be positive")
    if removal_mode not in ("pvalue_one", "delete_nodes"):
        raise ValueError(f"unknown removal_mode {removal_mode!r}")
    if removal_mode == "delete_nodes" and recalibrate is None:
        raise ValueError("delete_nodes removal invalidates the calibration table "
                         "fingerprint; supply a recalibrate callback")
    cur_g = g
    cur_p = np.asarray(p, dtype=float).copy()
    cur_table = table
    to_original = np.arange(g.node_count)
    out: list[DetectionResult] = []
    for it in range(max_clusters):
        res = detect(cur_g, cur_p, cur_table, grid, statistic,
                     use_coretree=use_coretree, coretree_d=coretree_d)
        res = significance_test(res, cur_g, cur_table, grid, statistic,
                                replica_count, base_seed + it * replica_count,
                                workers=workers, use_coretree=use_coretree,
                                coretree_d=coretree_d)
        if res.significance_p > significance_threshold:
            break
        local = sorted(int(v) for v in res.subgraph)
        original_set = frozenset(int(to_original[v]) for v in local)
        out.append(replace(res, subgraph=original_set))
        if removal_mode == "pvalue_one":
            cur_p[local] = 1.0
        else:
            keep = np.setdiff1d(np.arange(cur_g.node_count), np.asarray(local))
            if keep.size == 0:
                break
            cur_g, kept_ids = induced_subgraph(cur_g, keep)
            cur_p = cur_p[kept_ids]
            to_original = to_original[kept_ids]
            cur_table = recalibrate(cur_g)
    return out


# --- result document -----------------------------------------------------------

def write_result(stream: IO[str], res: DetectionResult, g: Graph) -> None:
    """Structured text document for one detection (original node labels)."""
    stream.write("# calscan detection result\n")
    stream.write(f"statistic: {res.statistic}\n")
    stream.write(f"alpha_star: {res.alpha_star:.17g}\n")
    stream.write(f"n: {res.n}\n")
    stream.write(f"n_alpha: {res.n_alpha}\n")
    stream.write(f"score: {res.score:.17g}\n")
    stream.write(f"table_provenance: {res.table_provenance}\n")
    if res.significance_p is not None:
        stream.write(f"significance_p: {res.significance_p:.17g}\n")
    for key, val in sorted(res.seeds.items()):
        stream.write(f"seed_{key}: {val}\n")
    labels = " ".join(g.labels[int(v)] for v in sorted(res.subgraph))
    stream.write(f"nodes: {labels}\n")
    if res.null_scores is not None:
        stream.write("null_scores: " +
                     " ".join(f"{s:.17g}" for s in res.null_scores) + "\n")


def read_result(stream: IO[str] | str, g: Graph) -> DetectionResult:
    """Parse a result document back into a DetectionResult (dense node ids)."""
    text = stream if isinstance(stream, str) else stream.read()
    fields: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition(":")
        fields[key.strip()] = val.strip()
    try:
        subgraph = frozenset(g.id_of(tok) for tok in fields["nodes"].split())
        nulls = None
        if "null_scores" in fields:
            nulls = np.asarray([float(x) for x in fields["null_scores"].split()])
        sig = float(fields["significance_p"]) if "significance_p" in fields else None
        seeds = {k[len("seed_"):]: int(v) for k, v in fields.items()
                 if k.startswith("seed_")}
        return DetectionResult(
            subgraph=subgraph, alpha_star=float(fields["alpha_star"]),
            n=int(fields["n"]), n_alpha=int(fields["n_alpha"]),
            score=float(fields["score"]), statistic=fields["statistic"],
            table_provenance=fields.get("table_provenance", "unknown"),
            null_scores=nulls, significance_p=sig, seeds=seeds)
    except KeyError as exc:
        raise ValueError(f"result document missing field {exc}") from None
