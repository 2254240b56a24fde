"""
Vector value types shared by the solver, learners and harness.

ProbVector and LossRange sit on the hot path (one ProbVector per round), so
ProbVector is a frozen dataclass over a read-only numpy array rather than a
pydantic model. Validation happens once at construction.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class LossRange(str, Enum):
    """Declared range of a loss sequence or of what a learner accepts."""

    UNIT = "unit"      # [0, 1]
    SIGNED = "signed"  # [-1, 1]

    @property
    def bounds(self) -> tuple[float, float]:
        return (0.0, 1.0) if self is LossRange.UNIT else (-1.0, 1.0)

    def contains(self, other: "LossRange") -> bool:
        """True when every loss in `other` is also in this range."""
        lo, hi = self.bounds
        other_lo, other_hi = other.bounds
        return lo <= other_lo and other_hi <= hi

    def admits(self, loss: float) -> bool:
        lo, hi = self.bounds
        return lo <= loss <= hi


@dataclass(frozen=True)
class ProbVector:
    """
    A point on the K-simplex.

    Construction checks only that entries are nonnegative and sum to one within
    `atol`; zeros are accepted. The stronger invariant is `is_interior` (every
    entry > 0), which every FTRL solution over the full arm set satisfies.
    Sleeping distributions and deterministic exploration rounds may carry
    zeros and are not interior.
    """

    values: np.ndarray
    atol: float = field(default=1e-10, repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"ProbVector needs a non-empty 1-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("ProbVector entries must be finite")
        if np.any(arr < 0.0):
            raise ValueError(f"ProbVector entries must be nonnegative, min={arr.min()!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > self.atol:
            raise ValueError(f"ProbVector entries sum to {total!r}, not 1 within {self.atol}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def uniform(cls, k: int) -> "ProbVector":
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def one_hot(cls, k: int, arm: int) -> "ProbVector":
        values = np.zeros(k)
        values[arm] = 1.0
        return cls(values)

    @property
    def k(self) -> int:
        return int(self.values.size)

    @property
    def is_interior(self) -> bool:
        return bool(np.all(self.values > 0.0))

    @property
    def tilde(self) -> np.ndarray:
        """min(p, 1 - p) per coordinate."""
        return np.minimum(self.values, 1.0 - self.values)

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, index: int) -> float:
        return float(self.values[index])
