# Worker Pool
"""
Thread pool shared by the pipelines.
Segment groups are submitted as independent tasks; results come back in
submission order so the reduction order never depends on scheduling.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from lfun.config import config


T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(requested: Optional[int] = None) -> int:
    """LFUN_THREADS wins over the requested count; default is the CPU count."""
    env = os.getenv("LFUN_THREADS", "").strip()
    if env:
        return max(1, int(env))
    if requested:
        return max(1, requested)
    if config.THREADS:
        return max(1, config.THREADS)
    return os.cpu_count() or 1


class WorkerPool:
    """
    Executor wrapper with an explicit lifecycle.

    This class manages a single ThreadPoolExecutor shared by every pipeline
    run in the process. numpy releases the GIL inside its kernels, so
    groups overlap on large jets.
    """

    def __init__(self):
        self._executor: Optional[ThreadPoolExecutor] = None
        self._threads = 1

    def start(self, threads: Optional[int] = None) -> None:
        """
        Create the executor. A running pool with another size is restarted.
        """
        count = resolve_threads(threads)
        if self._executor is not None:
            if count == self._threads:
                return  # Already running
            self.shutdown()
        self._threads = count
        if count > 1:
            self._executor = ThreadPoolExecutor(max_workers=count, thread_name_prefix="lfun")

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        self._threads = 1

    @property
    def threads(self) -> int:
        return self._threads

    def get_executor(self) -> ThreadPoolExecutor:
        """
        Get the executor instance.

        Raises:
            RuntimeError: If the pool is not started or runs single-threaded
        """
        if self._executor is None:
            raise RuntimeError(
                "Worker pool not initialized. "
                "Call start() with more than one thread first."
            )
        return self._executor

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """Apply fn to every item; results in input order. Serial when not started."""
        if self._executor is None:
            return [fn(item) for item in items]
        return list(self._executor.map(fn, items))


# Global worker pool instance
worker_pool = WorkerPool()
