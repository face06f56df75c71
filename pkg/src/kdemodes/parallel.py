"""Order-preserving parallel map over processes.

Work items are mapped by index and results assembled in input order, so
output never depends on the worker count.  Worker functions must be
module-level (picklable) and own their random streams.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["parallel_map", "resolve_threads"]


def resolve_threads(threads) -> int:
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    n = int(threads)
    if n < 1:
        raise ValueError(f"threads must be >= 1 or 'auto', got {threads}")
    return n


def parallel_map(fn, items, threads=1) -> list:
    """Map fn over items, preserving order; processes when threads > 1."""
    items = list(items)
    n = resolve_threads(threads)
    if n <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
