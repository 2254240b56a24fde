"""
Reservoir Models - fixed-capacity loss memory for one arm.

A reservoir keeps at most `capacity` observed losses of an arm and exposes
their arithmetic mean, which the optimistic learner uses as its prediction.

Two phases:
  - fill:    append while the warm-up round-robin visits the arm
  - replace: overwrite the sample at index floor(u * |samples|)

Schedule: round t is a reservoir round with probability min(K ln T / t, 1).
The capacity is ceil(ln T) (at least 1), and the fill phase covers the first
K * ceil(ln T) rounds so the round-robin fills each reservoir exactly once.
"""
import math
from enum import Enum

from pydantic import BaseModel, Field, computed_field, model_validator

from ..exceptions import ReplaceOnEmpty


class ReservoirPhase(str, Enum):
    FILL = "fill"
    REPLACE = "replace"


class Reservoir(BaseModel):
    """Bounded uniform subsample of one arm's observed losses."""

    capacity: int = Field(ge=1)
    samples: list[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def _within_capacity(self) -> "Reservoir":
        if len(self.samples) > self.capacity:
            raise ValueError(f"{len(self.samples)} samples exceed capacity {self.capacity}")
        if any(not 0.0 <= s <= 1.0 for s in self.samples):
            raise ValueError("reservoir samples must lie in [0, 1]")
        return self

    @computed_field
    @property
    def mean(self) -> float:
        """Exact arithmetic mean of the samples, 0 when empty."""
        if not self.samples:
            return 0.0
        return math.fsum(self.samples) / len(self.samples)

    @property
    def is_full(self) -> bool:
        return len(self.samples) >= self.capacity


def reservoir_capacity(horizon: int) -> int:
    """ceil(ln T), at least 1."""
    return max(1, math.ceil(math.log(horizon)))


def fill_window(num_arms: int, horizon: int) -> int:
    """Number of warm-up round-robin rounds: K * ceil(ln T)."""
    return num_arms * reservoir_capacity(horizon)


def schedule_reservoir_round(t: int, num_arms: int, horizon: int, u: float) -> bool:
    """True when u < min(K ln T / t, 1)."""
    if not 1 <= t <= horizon:
        raise ValueError(f"round {t} outside [1, {horizon}]")
    return u < min(num_arms * math.log(horizon) / t, 1.0)


def reservoir_insert(reservoir: Reservoir, loss: float, phase: ReservoirPhase, u: float = 0.0) -> Reservoir:
    """Return the reservoir after a fill (append) or replace (overwrite at floor(u |S|))."""
    if not 0.0 <= loss <= 1.0:
        raise ValueError(f"reservoir losses must lie in [0, 1], got {loss}")
    samples = list(reservoir.samples)
    if ReservoirPhase(phase) is ReservoirPhase.FILL:
        if reservoir.is_full:
            raise ValueError(f"fill requested on a full reservoir (capacity {reservoir.capacity})")
        samples.append(loss)
    else:
        if not samples:
            raise ReplaceOnEmpty("replace requested on an empty reservoir", capacity=reservoir.capacity)
        index = min(int(math.floor(u * len(samples))), len(samples) - 1)
        samples[index] = loss
    return reservoir.model_copy(update={"samples": samples})
