"""
Reservoir Store Interface - contract for per-arm loss memory.

=============================================================================
PROVIDER PATTERN
=============================================================================

The optimistic learner only needs "record a loss for arm i" and "give me
every arm's running mean". Any class with these methods can back it; the
Protocol below is structural, so no inheritance is required.

USAGE:
    store = InMemoryReservoirStore(num_arms=8, capacity=reservoir_capacity(T))
    learner = OptimisticReservoirSpmLearner(config, rng, reservoirs=store)

A provider lives in providers/ and must round-trip its samples through
snapshot()/restore(), since learner checkpoints rely on it.
=============================================================================
"""
from typing import Protocol

import numpy as np

from .models import ReservoirPhase


class IReservoirStore(Protocol):
    """Per-arm reservoirs addressed by arm index."""

    def insert(self, arm: int, loss: float, phase: ReservoirPhase, u: float = 0.0) -> None:
        """
        Record a loss for one arm.

        Args:
            arm: Arm index in [0, K)
            loss: Observed loss in [0, 1]
            phase: fill appends, replace overwrites index floor(u * size)
            u: Uniform draw for the replace index
        """
        ...

    def means(self) -> np.ndarray:
        """Current mean estimate of every arm (0 for empty reservoirs)."""
        ...

    def sizes(self) -> list[int]:
        """Number of stored samples per arm."""
        ...

    def snapshot(self) -> list[list[float]]:
        """Stored samples per arm, for checkpoints."""
        ...

    def restore(self, samples: list[list[float]]) -> None:
        """Replace every reservoir's contents with a snapshot."""
        ...
