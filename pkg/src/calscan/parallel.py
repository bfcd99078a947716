"""Process-pool helper: deterministic ordered mapping over replica indices."""

from __future__ import annotations

import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, Optional, Sequence

ENV_WORKERS = "CALSCAN_THREADS"


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit argument wins, then the environment, then all cores."""
    if workers is not None:
        if workers < 1:
            raise ValueError("workers must be positive")
        return workers
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            val = int(env)
        except ValueError:
            raise ValueError(f"{ENV_WORKERS} must be an integer, got {env!r}") from None
        if val < 1:
            raise ValueError(f"{ENV_WORKERS} must be positive")
        return val
    return os.cpu_count() or 1


def ordered_map(fn: Callable, args: Sequence, workers: Optional[int] = None,
                initializer: Optional[Callable] = None,
                initargs: tuple = ()) -> Iterator:
    """Map fn over args, yielding results in argument order.

    Results are reduced by the caller in index order, so calibration output is
    independent of the worker count and scheduling.  With a single worker (or
    a single task) everything runs inline.
    """
    nworkers = min(resolve_workers(workers), len(args)) if args else 1
    if nworkers <= 1:
        if initializer is not None:
            initializer(*initargs)
        for a in args:
            yield fn(a)
        return
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:  # pragma: no cover - non-POSIX fallback
        ctx = multiprocessing.get_context()
    chunksize = max(1, len(args) // (nworkers * 4))
    with ProcessPoolExecutor(max_workers=nworkers, mp_context=ctx,
                             initializer=initializer, initargs=initargs) as pool:
        yield from pool.map(fn, args, chunksize=chunksize)
