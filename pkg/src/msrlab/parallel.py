"""Order-preserving parallel map driven by the MSRLAB_WORKERS variable."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable

ENV_WORKERS = "MSRLAB_WORKERS"


def worker_count() -> int:
    raw = os.environ.get(ENV_WORKERS, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(func: Callable, items: Iterable) -> list:
    """``list(map(func, items))``, spread over worker processes when asked.

    Results come back in input order either way, so output is reproducible.
    """
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
