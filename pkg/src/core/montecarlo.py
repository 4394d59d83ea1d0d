"""Seed splitting and an indexed worker pool for Monte Carlo runs."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

import numpy as np

from .errors import ParameterError
from ..utils import logger

T = TypeVar("T")


def spawn_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample `index` of a run seeded with `seed`.

    Every sample owns its stream, so results do not depend on how samples
    are split between workers.
    """
    return np.random.default_rng([int(seed), int(index)])


def run_indexed(count: int, seed: int, task: Callable[[int, np.random.Generator], T],
                workers: int = 1) -> List[T]:
    """Run task(index, rng) for index in 0..count-1 and return results in index order.

    Args:
        count: Number of samples
        seed: Run seed
        task: Per-sample work
        workers: Thread count (1 runs inline)
    """
    if count < 1:
        raise ParameterError(f"sample count must be >= 1, got {count}")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")

    def run_one(index: int) -> T:
        return task(index, spawn_rng(seed, index))

    logger.debug(f"monte carlo: {count} samples, seed {seed}, {workers} worker(s)")
    if workers == 1:
        return [run_one(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, range(count)))
