"""Order-preserving worker pool so Monte Carlo output never depends on the
worker count."""

from __future__ import annotations

import multiprocessing as mp

__all__ = ["parallel_map"]


def parallel_map(func, items, workers: int = 1):
    """map(func, items) with results in item order, optionally across a pool.

    func must be picklable (module-level, or functools.partial of one) when
    workers > 1.
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    chunksize = max(1, len(items) // (workers * 8))
    with mp.get_context("fork").Pool(processes=workers) as pool:
        return pool.map(func, items, chunksize=chunksize)
