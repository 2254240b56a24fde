"""
SPM for fully-adversarial sleeping bandits.

FTRL runs on the negated cumulative regret estimates -R_{t-1}; the emitted
distribution renormalizes q_t over the active set A_t. Inactive arms are
charged the played arm's loss, so their regret estimate does not move:

  l^_{t,i} = l_{t,I} 1{I = i} / p_{t,i}   for i in A_t
  l^_{t,i} = l_{t,I}                       for i not in A_t
  r_{t,i}  = l_{t,I} - l^_{t,i}

This keeps <l^_t, q_t> = l_{t,I} every round.
"""
import numpy as np

from ..exceptions import InactiveArmChosen
from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from ..solvers.simplex_solver import FtrlProblem, SimplexSolver
from .base import BaseLearner
from .spm_rules import spm_h_tsallis, spm_z_sleeping


class SleepingSpmLearner(BaseLearner):
    learner_id = "spm-sleeping"
    loss_range = LossRange.SIGNED
    description = "SPM on regret estimates for sleeping bandits (active sets vary per round)"

    def __init__(self, config: SpmConfig, rng: np.random.Generator | None = None):
        super().__init__(config, rng)
        self.cumulative_regrets = np.zeros(config.num_arms)
        self.beta = config.beta1
        self._solver = SimplexSolver()
        self._q: ProbVector | None = None

    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector:
        cfg = self.config
        mask = np.ones(cfg.num_arms, dtype=bool) if active is None else active
        problem = FtrlProblem.tsallis_log_barrier(-self.cumulative_regrets, self.beta, cfg.gamma, cfg.alpha)
        self._q = self._solver.solve(problem)
        filtered = np.where(mask, self._q.values, 0.0)
        return ProbVector(filtered / filtered.sum())

    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog:
        mask = np.ones(self.config.num_arms, dtype=bool) if active is None else active
        if not mask[arm]:
            raise InactiveArmChosen("played arm is not active this round", arm=arm, round=t)

        estimates = np.where(mask, 0.0, loss)
        estimates[arm] = loss / p[arm]
        regrets = loss - estimates
        self.cumulative_regrets += regrets

        z = spm_z_sleeping(p, mask, self.beta, self.config)
        h = spm_h_tsallis(self._q, self.config.alpha)
        beta = self.beta
        self.beta, warning = self._advance_beta(beta, z, h, t)

        return RoundLog(
            t=t,
            arm=arm,
            loss=loss,
            p=p.values,
            q=self._q.values,
            beta=beta,
            beta_next=self.beta,
            z=z,
            h=h,
            loss_estimate=estimates,
            active=mask.copy(),
            warning=warning,
        )

    def _state(self):
        scalars = {"beta": self.beta}
        vectors = {"cumulative_regrets": self.cumulative_regrets}
        self._dump_solver(self._solver, scalars, vectors)
        return scalars, vectors, None

    def _load_state(self, scalars, vectors, reservoirs) -> None:
        self.beta = scalars["beta"]
        self.cumulative_regrets = vectors["cumulative_regrets"].copy()
        self._load_solver(self._solver, scalars, vectors)
