"""
Coordinate-wise SPM: one learning rate per arm, only the played arm's moves.

Regularizer per coordinate:
  beta_i (-x^alpha / alpha + (1-x) ln(1-x) + x) - gamma ln x

Optimistic FTRL on m_t + L_{t-1}, where m_{t,i} is the count-based running
mean (1/2 + sum of arm i's past observed losses) / (1 + pulls of arm i).
Every other arm keeps z_{t,i} = 0, so beta_{t+1,i} = beta_{t,i} for i != I_t.

Accepts losses in [0, 1].
"""
import numpy as np

from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from ..solvers.simplex_solver import FtrlProblem, SimplexSolver
from .base import BaseLearner
from .spm_rules import cow_predictor, mix_exploration, optimistic_estimates, spm_h_coordinate, spm_z_coordinate


class CoordinateWiseSpmLearner(BaseLearner):
    learner_id = "spm-coordinate-wise"
    loss_range = LossRange.UNIT
    description = "Coordinate-wise SPM with per-arm learning rates, losses in [0, 1]"

    def __init__(self, config: SpmConfig, rng: np.random.Generator | None = None):
        super().__init__(config, rng)
        k = config.num_arms
        self.cumulative_estimates = np.zeros(k)
        self.betas = np.full(k, config.beta1)
        self.pulls = np.zeros(k)
        self.loss_sums = np.zeros(k)
        self._solver = SimplexSolver()
        self._q: ProbVector | None = None
        self._prediction: np.ndarray | None = None

    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector:
        cfg = self.config
        self._prediction = cow_predictor(self.pulls, self.loss_sums)
        problem = FtrlProblem.coordinate_wise_hybrid(
            self._prediction + self.cumulative_estimates, self.betas, cfg.gamma, cfg.alpha
        )
        self._q = self._solver.solve(problem)
        return mix_exploration(self._q, cfg.num_arms, cfg.horizon)

    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog:
        prediction = self._prediction
        estimates = optimistic_estimates(p, prediction, arm, loss)
        self.cumulative_estimates += estimates

        h = spm_h_coordinate(p, self.config.alpha)
        z = spm_z_coordinate(p[arm], loss, float(prediction[arm]), float(self.betas[arm]), self.config)
        betas = self.betas.copy()
        self.betas[arm], warning = self._advance_beta(float(betas[arm]), z, float(h[arm]), t)

        self.pulls[arm] += 1.0
        self.loss_sums[arm] += loss

        return RoundLog(
            t=t,
            arm=arm,
            loss=loss,
            p=p.values,
            q=self._q.values,
            beta=betas,
            beta_next=self.betas.copy(),
            z=z,
            h=h,
            loss_estimate=estimates,
            prediction=prediction,
            warning=warning,
        )

    def _state(self):
        scalars: dict[str, float] = {}
        vectors = {
            "cumulative_estimates": self.cumulative_estimates,
            "betas": self.betas,
            "pulls": self.pulls,
            "loss_sums": self.loss_sums,
        }
        self._dump_solver(self._solver, scalars, vectors)
        return scalars, vectors, None

    def _load_state(self, scalars, vectors, reservoirs) -> None:
        self.cumulative_estimates = vectors["cumulative_estimates"].copy()
        self.betas = vectors["betas"].copy()
        self.pulls = vectors["pulls"].copy()
        self.loss_sums = vectors["loss_sums"].copy()
        self._load_solver(self._solver, scalars, vectors)
