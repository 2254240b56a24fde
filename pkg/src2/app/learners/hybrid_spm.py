"""
Real-time SPM with hybrid (Tsallis + log-barrier) regularization.

Each round:
  q_t  = argmin <L_{t-1}, x> + beta_t (1/alpha)(1 - sum x^alpha) - gamma sum ln x
  p_t  = (1 - K/T) q_t + 1/T
  l^_t = importance-weighted estimate of the played arm's loss
  z_t  = spm_z_sparse(p_{t,I}, l^_{t,I}, l_{t,I}, beta_t)
  h_t  = (1/alpha)(sum p^alpha - 1)
  beta_{t+1} = beta_t + z_t / (beta_t h_t)

Accepts losses in [-1, 1].
"""
import numpy as np

from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from ..solvers.simplex_solver import FtrlProblem, SimplexSolver
from .base import BaseLearner
from .spm_rules import iw_estimates, mix_exploration, spm_h_tsallis, spm_z_sparse


class HybridSpmLearner(BaseLearner):
    learner_id = "spm-hybrid"
    loss_range = LossRange.SIGNED
    description = "Real-time SPM, Tsallis + log-barrier FTRL, losses in [-1, 1]"

    def __init__(self, config: SpmConfig, rng: np.random.Generator | None = None):
        super().__init__(config, rng)
        self.cumulative_estimates = np.zeros(config.num_arms)
        self.beta = config.beta1
        self._solver = SimplexSolver()
        self._q: ProbVector | None = None

    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector:
        cfg = self.config
        problem = FtrlProblem.tsallis_log_barrier(self.cumulative_estimates, self.beta, cfg.gamma, cfg.alpha)
        self._q = self._solver.solve(problem)
        return mix_exploration(self._q, cfg.num_arms, cfg.horizon)

    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog:
        estimates = iw_estimates(p, arm, loss)
        self.cumulative_estimates += estimates

        z = spm_z_sparse(p[arm], estimates[arm], loss, self.beta, self.config)
        h = spm_h_tsallis(p, self.config.alpha)
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
            warning=warning,
        )

    def _state(self):
        scalars = {"beta": self.beta}
        vectors = {"cumulative_estimates": self.cumulative_estimates}
        self._dump_solver(self._solver, scalars, vectors)
        return scalars, vectors, None

    def _load_state(self, scalars, vectors, reservoirs) -> None:
        self.beta = scalars["beta"]
        self.cumulative_estimates = vectors["cumulative_estimates"].copy()
        self._load_solver(self._solver, scalars, vectors)
