"""Thread-count setting and a deterministic chunked map.

numpy releases the GIL inside its array loops, so splitting a large
pointwise kernel along the leading axis gives real parallelism.  Each chunk
writes a disjoint slice of the output, so results are bit-identical for any
thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

__all__ = ["set_threads", "get_threads", "chunked"]

ENV_VAR = "STA_FIELDS_THREADS"
_threads: int | None = None


def set_threads(n: int | None) -> None:
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def get_threads() -> int:
    if _threads is not None:
        return _threads
    env = os.environ.get(ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"{ENV_VAR} must be an integer, got {env!r}") from exc
        if value >= 1:
            return value
    return 1


def chunked(fn: Callable[..., np.ndarray], *arrays: np.ndarray, min_rows: int = 2) -> np.ndarray:
    """Apply ``fn`` to matching leading-axis slices of ``arrays``."""
    n = get_threads()
    lead = arrays[0].shape[0] if arrays[0].ndim > 1 else 0
    if n == 1 or lead < n * min_rows:
        return fn(*arrays)
    bounds = np.linspace(0, lead, n + 1).astype(int)

    def run(i: int) -> np.ndarray:
        lo, hi = bounds[i], bounds[i + 1]
        return fn(*(a[lo:hi] for a in arrays))

    with ThreadPoolExecutor(max_workers=n) as pool:
        parts = list(pool.map(run, range(n)))
    return np.concatenate(parts, axis=0)
