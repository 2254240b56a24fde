"""
Reference solutions of the FTRL problem, computed without the solver module.

  brute_force_simplex_min   K in {2, 3}: golden-section (K=2) or a grid with
                            two refinement passes (K=3) on the objective
  reference_ftrl_solution   any K: nested brentq on the stationarity
                            conditions (outer multiplier, inner coordinates)

Potentials are re-derived here from their closed forms; nothing below calls
app.solvers.
"""
import math

import numpy as np
from scipy.optimize import brentq

from ..models.vectors import ProbVector
from ..solvers.simplex_solver import FtrlProblem


_EDGE = 1e-16
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _is_hybrid(problem: FtrlProblem) -> bool:
    return problem.kind.value == "coordinate_wise_hybrid"


def reference_objective(problem: FtrlProblem, x: np.ndarray) -> np.ndarray:
    """Objective at one point (shape (K,)) or many points (shape (..., K))."""
    x = np.asarray(x, dtype=float)
    a, g, b = problem.alpha, problem.gamma, problem.betas
    terms = -b * x ** a / a - g * np.log(x)
    if _is_hybrid(problem):
        one_minus = 1.0 - x
        entropy = np.where(one_minus > 0.0, one_minus * np.log(np.where(one_minus > 0.0, one_minus, 1.0)), 0.0)
        terms = terms + b * (entropy + x)
    return np.sum(problem.offsets * x + terms, axis=-1)


def _reference_derivative(problem: FtrlProblem, i: int, x: float) -> float:
    a, g, b = problem.alpha, problem.gamma, float(problem.betas[i])
    slope = -b * x ** (a - 1.0) - g / x
    if _is_hybrid(problem):
        slope -= b * math.log1p(-x)
    return slope


# =============================================================================
# Brute force (K = 2, 3)
# =============================================================================
def golden_section_two_arms(problem: FtrlProblem, resolution: float = 1e-9) -> ProbVector:
    """Minimize the K=2 objective over q_1 in (0, 1)."""
    if problem.k != 2:
        raise ValueError("golden-section reference needs K = 2")

    def f(q1: float) -> float:
        return float(reference_objective(problem, np.array([q1, 1.0 - q1])))

    lo, hi = _EDGE, 1.0 - _EDGE
    c, d = hi - _GOLDEN * (hi - lo), lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > resolution:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    q1 = 0.5 * (lo + hi)
    return ProbVector(np.array([q1, 1.0 - q1]))


def _grid_three_arms(problem: FtrlProblem, resolution: float) -> ProbVector:
    def best_on(center_x, center_y, half_width, step):
        xs = np.arange(max(center_x - half_width, step / 2), min(center_x + half_width, 1.0) + step / 2, step)
        ys = np.arange(max(center_y - half_width, step / 2), min(center_y + half_width, 1.0) + step / 2, step)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        gz = 1.0 - gx - gy
        points = np.stack([gx, gy, gz], axis=-1)
        inside = (gx > 0.0) & (gy > 0.0) & (gz > 0.0)
        safe = np.where(inside[..., None], points, 1.0 / 3.0)
        values = np.where(inside, reference_objective(problem, safe), np.inf)
        j = np.unravel_index(int(np.argmin(values)), values.shape)
        on_edge = (
            (j[0] == 0 and xs[0] > step) or (j[0] == len(xs) - 1 and xs[-1] < 1.0 - step)
            or (j[1] == 0 and ys[0] > step) or (j[1] == len(ys) - 1 and ys[-1] < 1.0 - step)
        )
        return float(gx[j]), float(gy[j]), on_edge

    step = 1e-2
    x, y, _ = best_on(0.5, 0.5, 0.5, step)
    # two refinement passes, each shrinking the step by a factor of 100;
    # a window whose best point sits on its edge is recentred and rescanned
    for _ in range(2):
        half_width = 2.5 * step
        step = max(step / 100.0, resolution)
        for _ in range(20):
            x, y, on_edge = best_on(x, y, half_width, step)
            if not on_edge:
                break
    return ProbVector(np.array([x, y, 1.0 - x - y]))


def brute_force_simplex_min(problem: FtrlProblem, resolution: float = 1e-6) -> ProbVector:
    if problem.k not in (2, 3):
        raise ValueError(f"brute force supports K in {{2, 3}}, got {problem.k}")
    if not 0.0 < resolution <= 1e-4:
        raise ValueError(f"resolution must lie in (0, 1e-4], got {resolution}")
    if problem.k == 2:
        return golden_section_two_arms(problem, min(resolution, 1e-9))
    return _grid_three_arms(problem, resolution)


# =============================================================================
# Nested root finding (any K)
# =============================================================================
def _coordinate(problem: FtrlProblem, i: int, target: float) -> float:
    lo, hi = _EDGE, 1.0 - _EDGE
    if _reference_derivative(problem, i, lo) >= target:
        return lo
    if _reference_derivative(problem, i, hi) <= target:
        return 1.0
    return brentq(lambda x: _reference_derivative(problem, i, x) - target, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def reference_ftrl_solution(problem: FtrlProblem) -> ProbVector:
    """Stationary point offsets_i + phi_i'(x_i) + lam = 0 with sum x = 1."""
    k = problem.k

    def total(lam: float) -> float:
        return math.fsum(_coordinate(problem, i, -problem.offsets[i] - lam) for i in range(k)) - 1.0

    # at lam_lo some coordinate reaches 1, so the total is nonnegative
    lam_lo = max(-problem.offsets[i] - _reference_derivative(problem, i, 1.0 - _EDGE) for i in range(k))
    step = 1.0
    lam_hi = lam_lo + step
    while total(lam_hi) > 0.0:
        step *= 2.0
        lam_hi = lam_lo + step
    lam = brentq(total, lam_lo, lam_hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    x = np.array([_coordinate(problem, i, -problem.offsets[i] - lam) for i in range(k)])
    return ProbVector(x / x.sum())
