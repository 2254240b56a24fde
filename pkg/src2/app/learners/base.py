"""
Learner interface and shared plumbing.

Round protocol (driven by the harness):

    p = learner.begin_round(t, active)    # distribution for round t
    arm = sample_arm(p, u)                 # inverse CDF, harness-owned uniform
    log = learner.observe(arm, loss)       # estimates, z, h, beta update

Rounds must be played in order t = 1, 2, ...; begin_round and observe must
alternate. A learner instance is single-threaded; distinct instances share
nothing and can run on different workers.
"""
import logging
from abc import ABC, abstractmethod
from typing import ClassVar, Protocol

import numpy as np

from ..exceptions import LossOutOfRange
from ..models.checkpoint import LearnerCheckpoint
from ..models.rounds import RoundLog, RoundOutcome
from ..models.spm import SpmConfig
from ..models.vectors import LossRange, ProbVector
from ..solvers.simplex_solver import SimplexSolver
from ..utils.rng import rng_from_state, rng_state
from .spm_rules import DEGENERATE_PENALTY, spm_update_beta


logger = logging.getLogger(__name__)


class ILearner(Protocol):
    """What the harness needs from a learner."""

    learner_id: ClassVar[str]
    loss_range: ClassVar[LossRange]

    def begin_round(self, t: int, active: np.ndarray | None = None) -> ProbVector: ...

    def observe(self, arm: int, loss: float) -> RoundLog: ...

    def to_checkpoint(self) -> LearnerCheckpoint: ...


class BaseLearner(ABC):
    """
    Shared state handling for every learner.

    Subclasses implement `_distribution`, `_update`, and the two checkpoint
    hooks `_state` / `_load_state`.
    """

    learner_id: ClassVar[str]
    loss_range: ClassVar[LossRange]
    description: ClassVar[str] = ""

    def __init__(self, config: SpmConfig, rng: np.random.Generator | None = None):
        self.config = config
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.t = 0
        self._p: ProbVector | None = None
        self._active: np.ndarray | None = None

    @property
    def num_arms(self) -> int:
        return self.config.num_arms

    # =========================================================================
    # Round protocol
    # =========================================================================
    def begin_round(self, t: int, active: np.ndarray | None = None) -> ProbVector:
        if t != self.t + 1 or self._p is not None:
            raise RuntimeError(f"{self.learner_id}: round {t} requested after round {self.t}")
        if active is not None:
            active = np.asarray(active, dtype=bool)
            if active.shape != (self.num_arms,) or not active.any():
                raise ValueError("active set must be a nonempty boolean mask over the arms")
        self._active = active
        self._p = self._distribution(t, active)
        return self._p

    def observe(self, arm: int, loss: float) -> RoundLog:
        if self._p is None:
            raise RuntimeError(f"{self.learner_id}: observe called before begin_round")
        if not self.loss_range.admits(loss):
            raise LossOutOfRange(
                f"{self.learner_id} accepts losses in {self.loss_range.bounds}",
                loss=loss,
                round=self.t + 1,
            )
        log = self._update(self.t + 1, arm, float(loss), self._p, self._active)
        self.t += 1
        self._p = None
        self._active = None
        return log

    def step(self, outcome: RoundOutcome) -> RoundLog:
        """observe() driven by a RoundOutcome."""
        return self.observe(outcome.arm, outcome.loss)

    @abstractmethod
    def _distribution(self, t: int, active: np.ndarray | None) -> ProbVector: ...

    @abstractmethod
    def _update(self, t: int, arm: int, loss: float, p: ProbVector, active: np.ndarray | None) -> RoundLog: ...

    def _advance_beta(self, beta: float, z: float, h: float, t: int) -> tuple[float, str | None]:
        """SPM update, skipped with a warning when h is degenerate."""
        if h <= DEGENERATE_PENALTY:
            message = f"degenerate penalty h={h:.3e}; learning rate held"
            logger.warning("[%s] round %d: %s", self.learner_id, t, message)
            return beta, message
        return spm_update_beta(beta, z, h), None

    # =========================================================================
    # Checkpoints
    # =========================================================================
    def to_checkpoint(self) -> LearnerCheckpoint:
        if self._p is not None:
            raise RuntimeError("checkpoints are taken between rounds")
        scalars, vectors, reservoirs = self._state()
        return LearnerCheckpoint(
            learner_id=self.learner_id,
            config=self.config,
            round=self.t,
            scalars=scalars,
            vectors={name: [float(v) for v in values] for name, values in vectors.items()},
            reservoirs=reservoirs,
            rng_state=rng_state(self.rng),
        )

    @classmethod
    def from_checkpoint(cls, checkpoint: LearnerCheckpoint) -> "BaseLearner":
        if checkpoint.learner_id != cls.learner_id:
            raise ValueError(f"checkpoint is for {checkpoint.learner_id}, not {cls.learner_id}")
        rng = rng_from_state(checkpoint.rng_state) if checkpoint.rng_state else None
        learner = cls(checkpoint.config, rng)
        learner.t = checkpoint.round
        learner._load_state(
            checkpoint.scalars,
            {name: np.array(values, dtype=float) for name, values in checkpoint.vectors.items()},
            checkpoint.reservoirs,
        )
        return learner

    @staticmethod
    def _dump_solver(solver: SimplexSolver, scalars: dict[str, float], vectors: dict[str, np.ndarray]) -> None:
        multiplier, x = solver.warm_state()
        if multiplier is not None and x is not None:
            scalars["solver_multiplier"] = multiplier
            vectors["solver_x"] = x

    @staticmethod
    def _load_solver(solver: SimplexSolver, scalars: dict[str, float], vectors: dict[str, np.ndarray]) -> None:
        if "solver_multiplier" in scalars:
            solver.set_warm_state(scalars["solver_multiplier"], vectors["solver_x"])

    @abstractmethod
    def _state(self) -> tuple[dict[str, float], dict[str, np.ndarray], list[list[float]] | None]: ...

    @abstractmethod
    def _load_state(
        self,
        scalars: dict[str, float],
        vectors: dict[str, np.ndarray],
        reservoirs: list[list[float]] | None,
    ) -> None: ...
