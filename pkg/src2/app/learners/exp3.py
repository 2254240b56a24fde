"""EXP3 with uniform exploration - comparison baseline only."""
import math

import numpy as np
from scipy.special import softmax

from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from .base import BaseLearner
from .spm_rules import iw_estimates


class Exp3Learner(BaseLearner):
    learner_id = "exp3"
    loss_range = LossRange.UNIT
    description = "EXP3 with uniform exploration (baseline), losses in [0, 1]"

    def __init__(self, config: SpmConfig, rng: np.random.Generator | None = None):
        super().__init__(config, rng)
        k, horizon = config.num_arms, config.horizon
        self.eta = math.sqrt(math.log(k) / (k * horizon))
        self.exploration = min(1.0, math.sqrt(k * math.log(k) / horizon))
        self.cumulative_estimates = np.zeros(k)

    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector:
        q = softmax(-self.eta * self.cumulative_estimates)
        return ProbVector((1.0 - self.exploration) * q + self.exploration / self.config.num_arms)

    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog:
        estimates = iw_estimates(p, arm, loss)
        self.cumulative_estimates += estimates
        return RoundLog(
            t=t, arm=arm, loss=loss, p=p.values, beta=self.eta, beta_next=self.eta, z=0.0, h=0.0,
            loss_estimate=estimates,
        )

    def _state(self):
        return {}, {"cumulative_estimates": self.cumulative_estimates}, None

    def _load_state(self, scalars, vectors, reservoirs) -> None:
        self.cumulative_estimates = vectors["cumulative_estimates"].copy()
