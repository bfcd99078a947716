"""Node p-value generation under null and alternative hypotheses, and empirical p-values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Optional

import numpy as np
from scipy.stats import norm

from .graph import EdgeListParseError, Graph, NodeSet, is_connected

TINY = 5e-324  # smallest positive float, keeps p-values inside (0, 1]


@dataclass(frozen=True)
class SignalSpec:
    """Alternative-hypothesis signal description.

    kind "gaussian": mu > 0 is the mean shift inside the true subgraph.
    kind "piecewise": q in (0, 100] is the expected percentage of subgraph
    p-values drawn below alpha_sig (default 0.01).
    """

    kind: str
    true_subgraph: NodeSet
    mu: Optional[float] = None
    q: Optional[float] = None
    alpha_sig: float = 0.01

    def __post_init__(self):
        if self.kind == "gaussian":
            if self.mu is None or self.mu <= 0.0:
                raise ValueError("gaussian signal requires mu > 0")
        elif self.kind == "piecewise":
            if self.q is None or not (0.0 < self.q <= 100.0):
                raise ValueError("piecewise signal requires 0 < q <= 100")
            if not (0.0 < self.alpha_sig < 1.0):
                raise ValueError("alpha_sig must lie in (0, 1)")
        else:
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if not self.true_subgraph:
            raise ValueError("true subgraph is empty")


def null_pvalues(n: int, seed: int) -> np.ndarray:
    """i.i.d. Uniform(0, 1] draws, one per node; deterministic per seed."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    return 1.0 - rng.random(n)


def inject_gaussian(seed: int, spec: SignalSpec, g: Graph) -> np.ndarray:
    """Uniform p-values with p = 1 - Phi(Normal(mu, 1)) inside the true subgraph."""
    if not is_connected(g, spec.true_subgraph):
        raise ValueError("true subgraph is not connected")
    rng = np.random.default_rng(seed)
    p = 1.0 - rng.random(g.node_count)
    ids = np.asarray(sorted(spec.true_subgraph), dtype=np.int64)
    z = rng.normal(spec.mu, 1.0, size=ids.size)
    p[ids] = np.maximum(norm.sf(z), TINY)
    return p


def inject_piecewise(seed: int, spec: SignalSpec, g: Graph) -> np.ndarray:
    """Piecewise-constant signal: with probability q/100 draw p ~ U(0, alpha_sig],
    otherwise p ~ U(alpha_sig, 1], inside the true subgraph; uniform outside."""
    if not is_connected(g, spec.true_subgraph):
        raise ValueError("true subgraph is not connected")
    rng = np.random.default_rng(seed)
    p = 1.0 - rng.random(g.node_count)
    ids = np.asarray(sorted(spec.true_subgraph), dtype=np.int64)
    a = spec.alpha_sig
    coin = rng.random(ids.size) < spec.q / 100.0
    low = a * (1.0 - rng.random(ids.size))
    high = a + (1.0 - a) * (1.0 - rng.random(ids.size))
    p[ids] = np.where(coin, low, high)
    return p


def inject(seed: int, spec: SignalSpec, g: Graph) -> np.ndarray:
    if spec.kind == "gaussian":
        return inject_gaussian(seed, spec, g)
    return inject_piecewise(seed, spec, g)


def empirical_pvalue(x: float, history) -> float:
    """One-sided empirical p-value: (1 + #{t : history[t] >= x}) / (1 + T)."""
    h = np.asarray(history, dtype=float)
    if h.ndim != 1 or h.size < 1:
        raise ValueError("history must be a non-empty vector")
    return float((1 + np.count_nonzero(h >= x)) / (1 + h.size))


def two_stage_pvalue(current, history) -> float:
    """Two-stage empirical p-value for a feature vector against T historical vectors.

    Stage 1 ranks each feature of the current and each historical vector
    against the pooled observations (historical ranks include the current
    observation).  Stage 2 returns the normalized rank of the current vector's
    minimum first-stage p-value among the historical minima.
    """
    cur = np.asarray(current, dtype=float)
    hist = np.asarray(history, dtype=float)
    if cur.ndim != 1:
        raise ValueError("current must be a vector")
    if hist.ndim != 2 or hist.shape[1] != cur.size:
        raise ValueError("history must be T x J with J matching current")
    t = hist.shape[0]
    if t < 1:
        raise ValueError("history must contain at least one vector")
    p_cur = (1 + (hist >= cur).sum(axis=0)) / (1 + t)
    # for row t: 1 + 1{cur >= hist_t} + sum_{t' != t} 1{hist_t' >= hist_t}
    cross = (hist[:, None, :] >= hist[None, :, :]).sum(axis=0) - 1
    p_hist = (1 + (cur >= hist).astype(int) + cross) / (1 + t)
    pmin_cur = p_cur.min()
    pmin_hist = p_hist.min(axis=1)
    return float((1 + np.count_nonzero(pmin_hist <= pmin_cur)) / (1 + t))


def save_pvalues(stream: IO[str], g: Graph, p: np.ndarray) -> None:
    """Write the two-column `node_label p_value` format."""
    _check_assignment(g, p)
    stream.write("# node_label p_value\n")
    for i in range(g.node_count):
        stream.write(f"{g.labels[i]} {p[i]:.17g}\n")


def load_pvalues(stream: IO[str] | str, g: Graph) -> np.ndarray:
    """Read `node_label p_value` lines ('#' comments); validates (0, 1] and coverage."""
    text = stream if isinstance(stream, str) else stream.read()
    p = np.full(g.node_count, np.nan)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise EdgeListParseError(f"expected 2 tokens, got {len(toks)}", lineno)
        try:
            node = g.id_of(toks[0])
        except KeyError:
            raise EdgeListParseError(f"unknown node label {toks[0]!r}", lineno) from None
        try:
            val = float(toks[1])
        except ValueError:
            raise EdgeListParseError(f"bad p-value {toks[1]!r}", lineno) from None
        if not (0.0 < val <= 1.0):
            raise EdgeListParseError(f"p-value {val} outside (0, 1]", lineno)
        p[node] = val
    if np.isnan(p).any():
        missing = int(np.isnan(p).argmax())
        raise EdgeListParseError(f"no p-value for node {g.labels[missing]!r}")
    return p


def _check_assignment(g: Graph, p: np.ndarray) -> None:
    if p.shape != (g.node_count,):
        raise ValueError("p-value vector length must equal node count")
    if not ((p > 0.0) & (p <= 1.0)).all():
        raise ValueError("p-values must lie in (0, 1]")
