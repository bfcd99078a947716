"""Figure rendering for report outputs (written next to the delimited files)."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .calibration import CalibrationTable  # noqa: E402


def plot_alpha_prime_curves(table: CalibrationTable, path,
                            alphas: Optional[Sequence[float]] = None,
                            title: str = "expected max significant proportion") -> None:
    """One curve per significance level: surface value vs subgraph size."""
    alphas = list(alphas) if alphas is not None else list(table.grid)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    import numpy as np
    ns = np.arange(1, table.n_max + 1)
    for a in alphas:
        ax.plot(ns, table.column(a), lw=1.2, label=f"alpha={a:g}")
        ax.axhline(a, color="grey", lw=0.5, ls=":")
    ax.set_xscale("log")
    ax.set_xlabel("subgraph size N")
    ax.set_ylabel("alpha'(N, alpha)")
    ax.set_ylim(0, 1.02)
    ax.set_title(title)
    if len(alphas) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bound_comparison(randomized: CalibrationTable, bound: CalibrationTable,
                          path, alphas: Sequence[float]) -> None:
    """Randomization surface vs closed-form lower bound, per level."""
    import numpy as np
    fig, axes = plt.subplots(1, len(alphas), figsize=(4.2 * len(alphas), 3.6),
                             squeeze=False)
    ns = np.arange(1, randomized.n_max + 1)
    for ax, a in zip(axes[0], alphas):
        ax.plot(ns, randomized.column(a), lw=1.2, label="randomization")
        ax.plot(ns, bound.column(a), lw=1.2, ls="--", label="lower bound")
        ax.set_xscale("log")
        ax.set_xlabel("subgraph size N")
        ax.set_ylabel("alpha'")
        ax.set_title(f"alpha={a:g}")
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_metric_runs(rows: Sequence[tuple[int, float, float, float]], path) -> None:
    """Per-run precision/recall/F-score bars from an evaluation table."""
    runs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.28
    ax.bar([r - width for r in runs], [r_[1] for r_ in rows], width, label="precision")
    ax.bar(runs, [r_[2] for r_ in rows], width, label="recall")
    ax.bar([r + width for r in runs], [r_[3] for r_ in rows], width, label="f-score")
    ax.set_xlabel("run")
    ax.set_ylim(0, 1.05)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
