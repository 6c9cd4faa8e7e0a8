"""Thread-count plumbing for the numba kernels."""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

import numba

THREADS_ENV = "MOBIUS_CRITERION_THREADS"


def _pick_threading_layer() -> None:
    # numba's default probes TBB first and warns when only an old TBB is
    # installed; go straight to OpenMP/workqueue unless the user chose a layer.
    if "NUMBA_THREADING_LAYER" in os.environ:
        return
    try:
        from numba.np.ufunc import omppool  # noqa: F401
    except ImportError:
        numba.config.THREADING_LAYER = "workqueue"
    else:
        numba.config.THREADING_LAYER = "omp"


_pick_threading_layer()


def max_threads() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


def resolve_threads(threads: int | None) -> int:
    """Map a requested thread count onto what numba can actually launch.

    ``None`` falls back to the ``MOBIUS_CRITERION_THREADS`` environment
    variable, then to all available threads.
    """
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else max_threads()
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return min(threads, max_threads())


@contextmanager
def thread_limit(threads: int | None) -> Iterator[int]:
    previous = numba.get_num_threads()
    count = resolve_threads(threads)
    numba.set_num_threads(count)
    try:
        yield count
    finally:
        numba.set_num_threads(previous)
