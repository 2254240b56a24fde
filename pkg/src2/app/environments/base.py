"""
Loss Environment - oblivious generators of loss vectors and active sets.

=============================================================================
OBLIVIOUS BY CONSTRUCTION
=============================================================================

An environment only ever sees its own RNG stream, never the learner's
actions. The harness materializes the whole T x K loss matrix (plus the
active mask for sleeping environments) before the learner plays, so:
  - regret against every fixed arm is computed from the full matrix
  - regenerating from the same stream reproduces the matrix bit for bit,
    whichever learner is being evaluated

emit_round(t, rng) is the per-round primitive; materialize(rng) calls it
for t = 1..T unless a subclass needs the whole sequence at once.
=============================================================================
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..exceptions import InvalidRegime
from ..models.vectors import LossRange


@dataclass(frozen=True)
class LossSchedule:
    """A realized environment: T x K losses, optional T x K active mask."""

    losses: np.ndarray
    loss_range: LossRange
    active: np.ndarray | None = None
    means: np.ndarray | None = None

    @property
    def horizon(self) -> int:
        return int(self.losses.shape[0])

    @property
    def num_arms(self) -> int:
        return int(self.losses.shape[1])


class LossEnvironment(ABC):
    """One regime at one horizon."""

    kind: str = ""

    def __init__(self, num_arms: int, horizon: int, loss_range: LossRange):
        if horizon < 1:
            raise InvalidRegime("horizon must be positive", horizon=horizon)
        self.num_arms = num_arms
        self.horizon = horizon
        self.loss_range = loss_range

    @property
    def mean_losses(self) -> np.ndarray | None:
        """Per-arm expected loss when the regime has one (stochastic kinds)."""
        return None

    @abstractmethod
    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray | None]:
        """Loss vector of round t and its active set (None: every arm active)."""

    def materialize(self, rng: np.random.Generator) -> LossSchedule:
        losses = np.empty((self.horizon, self.num_arms))
        masks: list[np.ndarray | None] = []
        for t in range(1, self.horizon + 1):
            losses[t - 1], active = self.emit_round(t, rng)
            masks.append(active)
        active = None if masks[0] is None else np.array(masks, dtype=bool)
        return self._schedule(losses, active)

    def _schedule(self, losses: np.ndarray, active: np.ndarray | None = None) -> LossSchedule:
        lo, hi = self.loss_range.bounds
        if losses.min() < lo or losses.max() > hi:
            raise InvalidRegime(
                f"{self.kind} emitted losses outside {self.loss_range.value}",
                low=float(losses.min()),
                high=float(losses.max()),
            )
        if active is not None and not active.any(axis=1).all():
            raise InvalidRegime("every round needs at least one active arm")
        means = self.mean_losses
        return LossSchedule(losses=losses, loss_range=self.loss_range, active=active, means=means)

    def _check_round(self, t: int) -> None:
        if not 1 <= t <= self.horizon:
            raise ValueError(f"round {t} outside [1, {self.horizon}]")
