"""Stochastic regimes: i.i.d. losses around fixed means, optionally corrupted."""
import math

import numpy as np

from ..models.environment import SelfBoundingSpec, StochasticGapsSpec
from .base import LossEnvironment


class StochasticGapsEnvironment(LossEnvironment):
    """
    Independent per-arm losses with mean base_mean + gap_i.

    bernoulli: l in {0, 1}.  uniform: l ~ Unif[mu - w, mu + w] with
    w = min(mu, 1 - mu), so the mean is exact without clipping.
    """

    kind = "stochastic_gaps"

    def __init__(self, spec: StochasticGapsSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        self.spec = spec
        self._means = np.array(spec.means, dtype=float)
        self._widths = np.minimum(self._means, 1.0 - self._means)

    @property
    def mean_losses(self) -> np.ndarray:
        return self._means.copy()

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        u = rng.random(self.num_arms)
        if self.spec.distribution == "bernoulli":
            return (u < self._means).astype(float), None
        return self._means + self._widths * (2.0 * u - 1.0), None


class SelfBoundingEnvironment(StochasticGapsEnvironment):
    """
    Stochastic gaps with the first floor(C) rounds corrupted.

    A corrupted round gives the optimal arm loss 1 and every other arm loss
    0, so the total corruption sum_t ||l_t - l'_t||_inf is at most floor(C).
    The uncorrupted draw is still made so the stream stays aligned with the
    plain stochastic environment.
    """

    kind = "self_bounding"

    def __init__(self, spec: SelfBoundingSpec, horizon: int):
        super().__init__(spec, horizon)
        self.corrupted_rounds = min(horizon, math.floor(spec.corruption))
        self.optimal_arm = int(np.argmin(self._means))

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        losses, _ = super().emit_round(t, rng)
        if t <= self.corrupted_rounds:
            losses = np.zeros(self.num_arms)
            losses[self.optimal_arm] = 1.0
        return losses, None
