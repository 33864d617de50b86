"""Optional process pool for independent grid points.

Each grid point is a pure function of (shared immutable payload, task);
results are aggregated in task order, so serial and parallel execution
produce identical output.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

_SHARED = None


def _init_worker(shared) -> None:
    global _SHARED
    _SHARED = shared


def _call(args):
    fn, task = args
    return fn(_SHARED, task)


def parallel_map(fn, tasks, shared, workers: int = 1) -> list:
    """Run ``fn(shared, task)`` for every task, optionally in worker processes."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(shared, task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(shared,)) as executor:
        return list(executor.map(_call, [(fn, task) for task in tasks]))
