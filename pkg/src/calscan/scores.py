"""Scan-statistic score functions: one-sided KL, BJ/HC/KS and calibrated variants."""

from __future__ import annotations

import math

import numpy as np

STATISTICS = ("cbj", "chc", "cks")


def kl_one_sided(a: float, b: float) -> float:
    """One-sided Kullback-Leibler divergence between proportions.

    Returns a*ln(a/b) + (1-a)*ln((1-a)/(1-b)) when a > b, else 0.
    The 0*ln(0) limits at a in {0, 1} are taken as 0.
    """
    if not (0.0 < b < 1.0):
        raise ValueError("reference proportion must lie in (0, 1)")
    if not (0.0 <= a <= 1.0):
        raise ValueError("observed proportion must lie in [0, 1]")
    if a <= b:
        return 0.0
    term1 = a * math.log(a / b) if a > 0.0 else 0.0
    term2 = (1.0 - a) * math.log((1.0 - a) / (1.0 - b)) if a < 1.0 else 0.0
    return term1 + term2


def kl_one_sided_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized kl_one_sided; b entries equal to 1 yield 0 (degenerate reference)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(a > 0.0, a * np.log(a / b), 0.0)
        t2 = np.where(a < 1.0, (1.0 - a) * np.log((1.0 - a) / (1.0 - b)), 0.0)
        out = t1 + t2
    out = np.where((a > b) & (b < 1.0), out, 0.0)
    return out


def bj_score(alpha: float, n_alpha: int, n: int) -> float:
    """Berk-Jones statistic: n * KL(n_alpha/n, alpha)."""
    if n < 1:
        raise ValueError("subgraph size must be positive")
    if n_alpha > n:
        raise ValueError("significant count exceeds size")
    return n * kl_one_sided(n_alpha / n, alpha)


def cbj_score(alpha: float, n_alpha: int, n: int, alpha_prime: float) -> float:
    """Calibrated Berk-Jones: n * KL(n_alpha/n, alpha_prime); 0 when alpha_prime == 1."""
    if n < 1:
        raise ValueError("subgraph size must be positive")
    if not (0.0 < alpha_prime <= 1.0):
        raise ValueError("alpha_prime must lie in (0, 1]")
    if alpha_prime == 1.0:
        return 0.0
    return n * kl_one_sided(n_alpha / n, alpha_prime)


def chc_score(alpha: float, n_alpha: int, n: int, alpha_ref: float) -> float:
    """Calibrated Higher Criticism: (n_alpha - ref*n)/sqrt(n*ref*(1-ref)), floored at 0."""
    if n < 1:
        raise ValueError("subgraph size must be positive")
    if not (0.0 < alpha_ref < 1.0):
        raise ValueError("alpha_ref must lie strictly in (0, 1)")
    z = (n_alpha - alpha_ref * n) / math.sqrt(n * alpha_ref * (1.0 - alpha_ref))
    return z if z > 0.0 else 0.0


def cks_score(alpha: float, n_alpha: int, n: int, alpha_ref: float) -> float:
    """Calibrated Kolmogorov-Smirnov: sqrt(n)*(n_alpha/n - ref), floored at 0."""
    if n < 1:
        raise ValueError("subgraph size must be positive")
    d = math.sqrt(n) * (n_alpha / n - alpha_ref)
    return d if d > 0.0 else 0.0


def calibrated_score(statistic: str, alpha: float, n_alpha: int, n: int,
                     alpha_prime: float) -> float:
    """Dispatch a calibrated statistic with the reference clamped to max(alpha_prime, alpha).

    The clamp guards against randomization tables where finite-sample noise puts
    alpha_prime slightly below alpha.  A reference of 1 scores 0 for every
    statistic (no observed proportion can exceed an expected maximum of 1).
    """
    ref = max(alpha_prime, alpha)
    if ref >= 1.0:
        return 0.0
    if statistic == "cbj":
        return cbj_score(alpha, n_alpha, n, ref)
    if statistic == "chc":
        return chc_score(alpha, n_alpha, n, ref)
    if statistic == "cks":
        return cks_score(alpha, n_alpha, n, ref)
    raise ValueError(f"unknown statistic {statistic!r}")
