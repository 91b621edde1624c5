"""Wall-clock measurement of rankers, one query at a time."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence


@dataclass
class RuntimeTable:
    algorithm: str
    seconds: list[float] = field(default_factory=list)     # best of the repeats, per query
    mean_seconds: list[float] = field(default_factory=list)  # mean of the repeats, per query

    @property
    def mean(self) -> float:
        return sum(self.seconds) / len(self.seconds) if self.seconds else 0.0

    @property
    def mean_of_means(self) -> float:
        return sum(self.mean_seconds) / len(self.mean_seconds) if self.mean_seconds else 0.0

    def rows(self):
        return [(self.algorithm, i, s) for i, s in enumerate(self.seconds)]


def measure_runtime(algorithm: Callable, queries: Sequence, name: str = "", repeats: int = 1) -> RuntimeTable:
    """Time ``algorithm(query)`` for each query; inputs must already be in memory.

    Queries run sequentially in the calling thread. With ``repeats > 1`` the
    table keeps the minimum and the mean over the repeats.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    table = RuntimeTable(name or getattr(algorithm, "__name__", "algorithm"))
    for q in queries:
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            algorithm(q)
            times.append(time.perf_counter() - t0)
        table.seconds.append(min(times))
        table.mean_seconds.append(sum(times) / len(times))
    return table
