"""
rothsq Workers - Ordered Thread Pool

numpy releases the GIL inside FFTs and vector kernels, so grid scans and trial
loops run on threads. Results always come back in input order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .settings import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(threads: Optional[int] = None) -> int:
    """Resolve the effective worker cap"""
    cap = threads if threads is not None else settings.threads
    if cap is None:
        cap = os.cpu_count() or 1
    return max(1, int(cap))


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Map fn over items with at most `threads` workers, preserving order"""
    items = list(items)
    workers = min(worker_count(threads), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
