"""
zk-betti - Worker Pool

Thin joblib wrapper. Results come back in input order, so callers that fold
them left to right get the same answer for any worker count.
"""

import logging
from typing import Callable, List, Optional, Sequence, TypeVar

from joblib import Parallel, delayed
from joblib.parallel import cpu_count

logger = logging.getLogger("zk-betti.parallel")

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    return max(1, cpu_count())


def parallel_map(function: Callable[[T], R], inputs: Sequence[T], workers: Optional[int] = 1) -> List[R]:
    """Apply ``function`` to every input, in order, on up to ``workers`` processes."""
    jobs = default_workers() if workers is None else max(1, workers)
    jobs = min(jobs, cpu_count(), max(1, len(inputs)))
    if jobs == 1:
        return [function(item) for item in inputs]
    logger.debug(f"Dispatching {len(inputs)} tasks to {jobs} workers")
    return Parallel(n_jobs=jobs)(delayed(function)(item) for item in inputs)


def chunked(items: Sequence[T], parts: int) -> List[Sequence[T]]:
    """Split ``items`` into at most ``parts`` contiguous, order-preserving chunks."""
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    out = []
    start = 0
    for k in range(parts):
        stop = start + size + (1 if k < extra else 0)
        out.append(items[start:stop])
        start = stop
    return out


def index_ranges(total: int, parts: int) -> List[range]:
    """Split range(total) into at most ``parts`` contiguous ranges."""
    return [r for r in chunked(range(total), parts) if len(r)]
