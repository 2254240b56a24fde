"""
In-Memory Reservoir Store - one Reservoir model per arm, held in a list.

Owned by a single learner instance; not shared across threads.
"""
import logging

import numpy as np

from ..models import Reservoir, ReservoirPhase, reservoir_insert


logger = logging.getLogger(__name__)


class InMemoryReservoirStore:
    """In-memory implementation of the IReservoirStore protocol."""

    def __init__(self, num_arms: int, capacity: int):
        self._reservoirs = [Reservoir(capacity=capacity) for _ in range(num_arms)]
        self._capacity = capacity
        logger.debug("[InMemoryReservoirStore] Initialized %d reservoirs of capacity %d", num_arms, capacity)

    @property
    def capacity(self) -> int:
        return self._capacity

    def reservoir(self, arm: int) -> Reservoir:
        return self._reservoirs[arm]

    def insert(self, arm: int, loss: float, phase: ReservoirPhase, u: float = 0.0) -> None:
        current = self._reservoirs[arm]
        if phase is ReservoirPhase.FILL and current.is_full:
            logger.debug("[InMemoryReservoirStore] Arm %d full during fill; replacing instead", arm)
            phase = ReservoirPhase.REPLACE
        self._reservoirs[arm] = reservoir_insert(current, loss, phase, u)

    def means(self) -> np.ndarray:
        return np.array([r.mean for r in self._reservoirs])

    def sizes(self) -> list[int]:
        return [len(r.samples) for r in self._reservoirs]

    def snapshot(self) -> list[list[float]]:
        return [list(r.samples) for r in self._reservoirs]

    def restore(self, samples: list[list[float]]) -> None:
        if len(samples) != len(self._reservoirs):
            raise ValueError(f"snapshot has {len(samples)} arms, store has {len(self._reservoirs)}")
        self._reservoirs = [Reservoir(capacity=self._capacity, samples=list(s)) for s in samples]
