"""
SPM with optimistic FTRL and reservoir sampling.

Round t is a reservoir round with probability min(K ln T / t, 1):
  - during the first K * ceil(ln T) rounds it plays arm t mod K and fills
    that arm's reservoir;
  - afterwards it plays a uniform arm and overwrites a uniform sample of
    that arm's reservoir.
A reservoir round refreshes the prediction m_t to the reservoir means and
leaves L and beta untouched.

Every other round is an optimistic FTRL round on m_t + L_{t-1} with the
hybrid regularizer, mixed exploration, optimistic estimates and the SPM
update on the innovations (l^ - m, l - m).

Accepts losses in [0, 1]. The learner owns an RNG stream for the schedule
and the replace index.
"""
import numpy as np

from ..memory import IReservoirStore, InMemoryReservoirStore, ReservoirPhase
from ..memory.models import fill_window, reservoir_capacity, schedule_reservoir_round
from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from ..solvers.simplex_solver import FtrlProblem, SimplexSolver
from .base import BaseLearner
from .spm_rules import mix_exploration, optimistic_estimates, spm_h_tsallis, spm_z_sparse


class OptimisticReservoirSpmLearner(BaseLearner):
    learner_id = "spm-optimistic-reservoir"
    loss_range = LossRange.UNIT
    description = "Optimistic FTRL with reservoir-mean predictions, losses in [0, 1]"

    def __init__(
        self,
        config: SpmConfig,
        rng: np.random.Generator | None = None,
        reservoirs: IReservoirStore | None = None,
    ):
        super().__init__(config, rng)
        k = config.num_arms
        self.cumulative_estimates = np.zeros(k)
        self.beta = config.beta1
        self.prediction = np.zeros(k)
        self.reservoirs = reservoirs or InMemoryReservoirStore(k, reservoir_capacity(config.horizon))
        self._fill_window = fill_window(k, config.horizon)
        self._solver = SimplexSolver()
        self._q: ProbVector | None = None
        self._phase: ReservoirPhase | None = None

    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector:
        cfg = self.config
        if schedule_reservoir_round(t, cfg.num_arms, cfg.horizon, float(self.rng.random())):
            self._q = None
            if t <= self._fill_window:
                self._phase = ReservoirPhase.FILL
                return ProbVector.one_hot(cfg.num_arms, t % cfg.num_arms)
            self._phase = ReservoirPhase.REPLACE
            return ProbVector.uniform(cfg.num_arms)

        self._phase = None
        problem = FtrlProblem.tsallis_log_barrier(
            self.prediction + self.cumulative_estimates, self.beta, cfg.gamma, cfg.alpha
        )
        self._q = self._solver.solve(problem)
        return mix_exploration(self._q, cfg.num_arms, cfg.horizon)

    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog:
        if self._phase is not None:
            return self._reservoir_round(t, arm, loss, p)

        prediction = self.prediction
        estimates = optimistic_estimates(p, prediction, arm, loss)
        self.cumulative_estimates += estimates

        innovation = loss - prediction[arm]
        z = spm_z_sparse(p[arm], estimates[arm] - prediction[arm], innovation, self.beta, self.config)
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
            prediction=prediction.copy(),
            warning=warning,
        )

    def _reservoir_round(self, t: int, arm: int, loss: float, p: ProbVector) -> RoundLog:
        # drawn on every reservoir round: a fill on a full reservoir turns into a replace
        u = float(self.rng.random())
        self.reservoirs.insert(arm, loss, self._phase, u)
        self.prediction = self.reservoirs.means()
        return RoundLog(
            t=t,
            arm=arm,
            loss=loss,
            p=p.values,
            beta=self.beta,
            beta_next=self.beta,
            z=0.0,
            h=0.0,
            prediction=self.prediction.copy(),
            exploration=True,
        )

    def _state(self):
        scalars = {"beta": self.beta}
        vectors = {"cumulative_estimates": self.cumulative_estimates, "prediction": self.prediction}
        self._dump_solver(self._solver, scalars, vectors)
        return scalars, vectors, self.reservoirs.snapshot()

    def _load_state(self, scalars, vectors, reservoirs) -> None:
        self.beta = scalars["beta"]
        self.cumulative_estimates = vectors["cumulative_estimates"].copy()
        self.prediction = vectors["prediction"].copy()
        if reservoirs is not None:
            self.reservoirs.restore(reservoirs)
        self._load_solver(self._solver, scalars, vectors)
