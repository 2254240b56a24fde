"""
Simplex FTRL solver.

Solves   argmin_{x in simplex}  <offsets, x> + sum_i phi_i(x_i)
for separable, strictly convex coordinate potentials with a log barrier.

Stationarity gives offsets_i + phi_i'(x_i) + lam = 0 for one scalar
multiplier lam, so x_i(lam) = (phi_i')^{-1}(-offsets_i - lam) and
sum_i x_i(lam) is strictly decreasing in lam. The solver:

  1. brackets lam by geometric expansion from lam_0 = -min_i offsets_i
     (or from the previous round's multiplier when warm),
  2. shrinks the bracket with Newton steps on sum_i x_i(lam) - 1, falling
     back to bisection whenever a step leaves the bracket,
  3. inverts every coordinate with invert_derivative, warm-started from the
     previous evaluation,
  4. checks the KKT residual of the result; above KKT_TOLERANCE every
     coordinate is re-inverted at the final multiplier with POLISH_RTOL,
     and a second miss raises NonConvergence.

SimplexSolver keeps the warm start (one instance per learner).
solve_ftrl is the stateless entry point and is safe to call from any thread.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ..exceptions import InvalidPotential, NonConvergence
from ..models.vectors import ProbVector
from .potentials import (
    CoordinatePotential,
    PotentialKind,
    derivative,
    invert_derivative,
    second_derivative,
    validate_parameters,
    value,
)


logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
MAX_OUTER_ITERATIONS = 200
KKT_TOLERANCE = 1e-8
POLISH_RTOL = 1e-14


@dataclass(frozen=True)
class FtrlProblem:
    """
    Offsets plus one potential per coordinate.

    All coordinates share the potential kind, gamma and alpha; beta may
    differ per coordinate (the coordinate-wise learner keeps one per arm).
    """

    offsets: np.ndarray
    kind: PotentialKind
    betas: np.ndarray
    gamma: float
    alpha: float

    def __post_init__(self) -> None:
        offsets = np.array(self.offsets, dtype=float)
        betas = np.broadcast_to(np.asarray(self.betas, dtype=float), offsets.shape).copy()
        if offsets.ndim != 1 or offsets.size < 2:
            raise InvalidPotential("FTRL problem needs K >= 2 coordinates", k=int(offsets.size))
        if not np.all(np.isfinite(offsets)):
            raise InvalidPotential("offsets must be finite", offsets=offsets.tolist())
        validate_parameters(betas, self.gamma, self.alpha)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "kind", PotentialKind(self.kind))

    @classmethod
    def tsallis_log_barrier(cls, offsets, beta: float, gamma: float, alpha: float) -> "FtrlProblem":
        return cls(np.asarray(offsets, dtype=float), PotentialKind.TSALLIS_LOG_BARRIER, beta, gamma, alpha)

    @classmethod
    def coordinate_wise_hybrid(cls, offsets, betas, gamma: float, alpha: float) -> "FtrlProblem":
        return cls(np.asarray(offsets, dtype=float), PotentialKind.COORDINATE_WISE_HYBRID, betas, gamma, alpha)

    @classmethod
    def from_potentials(cls, offsets, potentials: Sequence[CoordinatePotential]) -> "FtrlProblem":
        if len(potentials) != len(offsets):
            raise InvalidPotential("one potential per offset required", k=len(offsets), potentials=len(potentials))
        first = potentials[0]
        for pot in potentials[1:]:
            if (pot.kind, pot.gamma, pot.alpha) != (first.kind, first.gamma, first.alpha):
                raise InvalidPotential("potentials must share kind, gamma and alpha")
        return cls(
            np.asarray(offsets, dtype=float),
            first.kind,
            np.array([pot.beta for pot in potentials]),
            first.gamma,
            first.alpha,
        )

    @property
    def k(self) -> int:
        return int(self.offsets.size)

    @property
    def potentials(self) -> list[CoordinatePotential]:
        return [CoordinatePotential(self.kind, float(b), self.gamma, self.alpha) for b in self.betas]

    def derivative(self, x: np.ndarray) -> np.ndarray:
        return derivative(self.kind, x, self.betas, self.gamma, self.alpha)

    def objective(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(self.offsets @ x + np.sum(value(self.kind, x, self.betas, self.gamma, self.alpha)))


@dataclass(frozen=True)
class _Evaluation:
    multiplier: float
    x: np.ndarray
    status: np.ndarray

    @property
    def excess(self) -> float:
        """sum(x) - 1, +inf when some coordinate is pinned above its range."""
        if np.any(self.status > 0):
            return float("inf")
        return float(self.x.sum() - 1.0)


class SimplexSolver:
    """
    Warm-started FTRL solver over the probability simplex.

    Usage:
        solver = SimplexSolver()
        q = solver.solve(FtrlProblem.tsallis_log_barrier(L, beta, gamma, alpha))
        solver.last_multiplier   # lam of the last solve
    """

    def __init__(self, tol: float = DEFAULT_TOLERANCE, max_iterations: int = MAX_OUTER_ITERATIONS):
        if tol <= 0.0:
            raise ValueError(f"tolerance must be positive, got {tol}")
        self.tol = tol
        self.max_iterations = max_iterations
        self._last_multiplier: float | None = None
        self._last_x: np.ndarray | None = None
        self.last_iterations = 0

    @property
    def last_multiplier(self) -> float | None:
        return self._last_multiplier

    def reset(self) -> None:
        self._last_multiplier = None
        self._last_x = None

    def warm_state(self) -> tuple[float | None, np.ndarray | None]:
        """Multiplier and point the next solve starts from (part of learner checkpoints)."""
        return self._last_multiplier, None if self._last_x is None else self._last_x.copy()

    def set_warm_state(self, multiplier: float | None, x: np.ndarray | None) -> None:
        self._last_multiplier = multiplier
        self._last_x = None if x is None else np.array(x, dtype=float)

    def solve(self, problem: FtrlProblem) -> ProbVector:
        warm_x = self._last_x if self._last_x is not None and self._last_x.size == problem.k else None
        start = self._last_multiplier if warm_x is not None else None
        lam, x = self._search(problem, start, warm_x)
        x = self._enforce_stationarity(problem, lam, x)
        self._last_multiplier = lam
        self._last_x = x
        return ProbVector(x, atol=max(self.tol, 1e-10))

    # =========================================================================
    # Multiplier search
    # =========================================================================
    def _evaluate(self, problem: FtrlProblem, lam: float, x0: np.ndarray | None) -> _Evaluation:
        targets = -problem.offsets - lam
        x, status = invert_derivative(problem.kind, targets, problem.betas, problem.gamma, problem.alpha, x0)
        return _Evaluation(lam, x, status)

    def _search(self, problem: FtrlProblem, start: float | None, x0: np.ndarray | None) -> tuple[float, np.ndarray]:
        lam0 = float(-np.min(problem.offsets)) if start is None else start
        current = self._evaluate(problem, lam0, x0)
        if abs(current.excess) <= self.tol:
            self.last_iterations = 0
            return current.multiplier, current.x

        # a warm start is usually one Newton step away; size the first step by it
        slope = self._slope(problem, current)
        if np.isfinite(current.excess) and slope < 0.0:
            step = max(2.0 * abs(current.excess / slope), 1e-12 * (1.0 + abs(lam0)))
        else:
            step = max(1.0, float(np.mean(problem.betas)) + problem.gamma)
        low, high = self._bracket(problem, current, step)
        # Newton needs every coordinate inside its range, which holds at `high`
        current = high

        for iteration in range(1, self.max_iterations + 1):
            slope = self._slope(problem, current)
            candidate = current.multiplier - current.excess / slope if slope < 0.0 else np.nan
            if not low.multiplier < candidate < high.multiplier:
                candidate = 0.5 * (low.multiplier + high.multiplier)

            current = self._evaluate(problem, candidate, current.x)
            if abs(current.excess) <= self.tol:
                self.last_iterations = iteration
                return current.multiplier, current.x
            if current.excess > 0.0:
                low = current
            else:
                high = current
            if high.multiplier - low.multiplier <= 4.0 * np.spacing(abs(high.multiplier) + 1.0):
                break

        raise NonConvergence(
            "multiplier search did not reach the normalization tolerance",
            iterations=self.max_iterations,
            excess=current.excess,
            bracket=(low.multiplier, high.multiplier),
        )

    def _enforce_stationarity(self, problem: FtrlProblem, lam: float, x: np.ndarray) -> np.ndarray:
        # the search multiplier bounds the residual from above; the minimax fit is only needed past it
        if _kkt_residual(problem, x, lam) <= KKT_TOLERANCE:
            return x
        residual = _kkt_residual(problem, x)
        if residual <= KKT_TOLERANCE:
            return x
        logger.debug("[solver] KKT residual %.3g at K=%d, polishing at lam=%.17g", residual, problem.k, lam)
        targets = -problem.offsets - lam
        x, _ = invert_derivative(
            problem.kind, targets, problem.betas, problem.gamma, problem.alpha, x, rtol=POLISH_RTOL
        )
        residual = _kkt_residual(problem, x)
        if residual > KKT_TOLERANCE:
            raise NonConvergence(
                "solution misses the stationarity tolerance",
                residual=residual,
                tolerance=KKT_TOLERANCE,
                k=problem.k,
                multiplier=lam,
            )
        return x

    @staticmethod
    def _slope(problem: FtrlProblem, ev: _Evaluation) -> float:
        """d/dlam of sum(x): -sum 1/phi''(x_i) over unpinned coordinates."""
        curvature = second_derivative(problem.kind, ev.x, problem.betas, problem.gamma, problem.alpha)
        return -float(np.sum(np.where(ev.status == 0, 1.0 / curvature, 0.0)))

    def _bracket(self, problem: FtrlProblem, start: _Evaluation, step: float) -> tuple[_Evaluation, _Evaluation]:
        """Expand geometrically until sum(x) - 1 changes sign."""
        x0 = start.x
        if start.excess > 0.0:
            low, trial = start, start
            while trial.excess > 0.0:
                low = trial
                trial = self._evaluate(problem, trial.multiplier + step, x0)
                step *= 2.0
            return low, trial
        high, trial = start, start
        while trial.excess < 0.0:
            high = trial
            trial = self._evaluate(problem, trial.multiplier - step, x0)
            step *= 2.0
        return trial, high


def solve_ftrl(problem: FtrlProblem, tol: float = DEFAULT_TOLERANCE) -> ProbVector:
    """Solve one FTRL problem from a cold start."""
    return SimplexSolver(tol=tol).solve(problem)


def _kkt_residual(problem: FtrlProblem, x: np.ndarray, multiplier: float | None = None) -> float:
    phi = problem.derivative(x)
    grad = problem.offsets + phi
    scale = np.maximum(1.0, np.abs(phi))

    def worst(lam: float) -> float:
        return float(np.max(np.abs(grad + lam) / scale))

    if multiplier is not None:
        return worst(multiplier)
    lo, hi = -float(grad.max()), -float(grad.min())
    if hi - lo <= 0.0:
        return 0.0

    # above minus below is increasing in lam and changes sign on [lo, hi];
    # its root is the multiplier with the smallest worst-case residual
    def balance(lam: float) -> float:
        shifted = (grad + lam) / scale
        return float(shifted.max() + shifted.min())

    lam = brentq(balance, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return worst(lam)


def stationarity_residual(problem: FtrlProblem, p: ProbVector, multiplier: float | None = None) -> float:
    """
    Largest deviation from offsets_i + phi_i'(p_i) + lam = 0, relative to
    max(1, |phi_i'(p_i)|).

    Without `multiplier`, lam is the single scalar that minimizes the largest
    deviation, so the value measures how far p is from any stationary point.
    """
    return _kkt_residual(problem, p.values, multiplier)
