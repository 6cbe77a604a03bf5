"""Deterministic helpers for optional thread parallelism.

Experiment cells are pure functions of their parameters, so they may be
evaluated concurrently; results are always assembled in input order.  The
environment variable ``CURRENTS_LAB_THREADS`` caps the pool size (1 disables
threading entirely).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "CURRENTS_LAB_THREADS"


def worker_count() -> int:
    """Pool size: CURRENTS_LAB_THREADS if set, else 1 (sequential)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """map() preserving input order, threaded when the env var allows it."""
    seq: Sequence[T] = list(items)
    workers = worker_count()
    if workers <= 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=min(workers, len(seq))) as pool:
        return list(pool.map(fn, seq))
