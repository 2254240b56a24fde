"""
Coordinate potentials of the FTRL regularizers.

Both regularizers are separable, so the per-round problem only needs the
scalar potential of each coordinate, its first and second derivative:

  tsallis_log_barrier     phi(x) = -beta x^a / a - gamma ln x
                          phi'(x) = -beta x^(a-1) - gamma / x
  coordinate_wise_hybrid  phi(x) = beta (-x^a / a + (1-x) ln(1-x) + x) - gamma ln x
                          phi'(x) = -beta (x^(a-1) + ln(1-x)) - gamma / x

Each derivative is strictly increasing on (0, 1) and tends to -inf at 0.
The tsallis_log_barrier derivative is bounded above by -beta - gamma at 1;
the hybrid one diverges to +inf.

All functions evaluate on the clamped domain [DOMAIN_LOWER, DOMAIN_UPPER] and
broadcast over numpy arrays so one call handles every coordinate.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import xlogy

from ..exceptions import InvalidPotential, NonConvergence, OutOfRange


DOMAIN_LOWER = 1e-16
DOMAIN_UPPER = 1.0 - 1e-16
INVERSION_RTOL = 1e-12
MAX_INVERSION_ITERATIONS = 200


class PotentialKind(str, Enum):
    TSALLIS_LOG_BARRIER = "tsallis_log_barrier"
    COORDINATE_WISE_HYBRID = "coordinate_wise_hybrid"


def validate_parameters(beta, gamma: float, alpha: float) -> None:
    """Raise InvalidPotential unless beta > 0, gamma > 0 and alpha in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise InvalidPotential("alpha must lie in (0, 1)", alpha=alpha)
    if not gamma > 0.0 or not np.isfinite(gamma):
        raise InvalidPotential("gamma must be positive", gamma=gamma)
    beta_arr = np.asarray(beta, dtype=float)
    if not np.all(beta_arr > 0.0) or not np.all(np.isfinite(beta_arr)):
        raise InvalidPotential("beta must be positive", beta=beta_arr.tolist())


def derivative(kind: PotentialKind, x, beta, gamma: float, alpha: float):
    x = np.clip(x, DOMAIN_LOWER, DOMAIN_UPPER)
    tsallis = x ** (alpha - 1.0)
    if kind is PotentialKind.COORDINATE_WISE_HYBRID:
        return -beta * (tsallis + np.log1p(-x)) - gamma / x
    return -beta * tsallis - gamma / x


def second_derivative(kind: PotentialKind, x, beta, gamma: float, alpha: float):
    x = np.clip(x, DOMAIN_LOWER, DOMAIN_UPPER)
    curvature = (1.0 - alpha) * x ** (alpha - 2.0)
    if kind is PotentialKind.COORDINATE_WISE_HYBRID:
        curvature = curvature + 1.0 / (1.0 - x)
    return beta * curvature + gamma / (x * x)


def value(kind: PotentialKind, x, beta, gamma: float, alpha: float):
    x = np.clip(x, DOMAIN_LOWER, DOMAIN_UPPER)
    tsallis = -(x ** alpha) / alpha
    if kind is PotentialKind.COORDINATE_WISE_HYBRID:
        return beta * (tsallis + xlogy(1.0 - x, 1.0 - x) + x) - gamma * np.log(x)
    return beta * tsallis - gamma * np.log(x)


def invert_derivative(
    kind: PotentialKind,
    targets: np.ndarray,
    beta,
    gamma: float,
    alpha: float,
    x0: np.ndarray | None = None,
    rtol: float = INVERSION_RTOL,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Solve phi_i'(x_i) = targets_i for every coordinate at once.

    Safeguarded Newton: each coordinate keeps a bracket [lo, hi] around its
    root and falls back to bisection (geometric while the bracket spans
    orders of magnitude) whenever the Newton candidate leaves it.

    Returns (x, status) where status is 0 for a solved coordinate, +1 when the
    target is at or above the derivative's value at DOMAIN_UPPER (x pinned to
    DOMAIN_UPPER) and -1 when it is at or below the value at DOMAIN_LOWER.
    """
    targets = np.asarray(targets, dtype=float)
    beta = np.broadcast_to(np.asarray(beta, dtype=float), targets.shape)

    upper_value = derivative(kind, DOMAIN_UPPER, beta, gamma, alpha)
    lower_value = derivative(kind, DOMAIN_LOWER, beta, gamma, alpha)
    status = np.zeros(targets.shape, dtype=int)
    status[targets >= upper_value] = 1
    status[targets <= lower_value] = -1
    solving = status == 0

    lo = np.full(targets.shape, DOMAIN_LOWER)
    hi = np.full(targets.shape, DOMAIN_UPPER)
    if x0 is None:
        x = np.full(targets.shape, 0.5)
    else:
        x = np.clip(np.asarray(x0, dtype=float), DOMAIN_LOWER, DOMAIN_UPPER)
    x = np.where(status == 1, DOMAIN_UPPER, np.where(status == -1, DOMAIN_LOWER, x))
    tol = rtol * np.maximum(1.0, np.abs(targets))

    for _ in range(MAX_INVERSION_ITERATIONS):
        residual = derivative(kind, x, beta, gamma, alpha) - targets
        done = ~solving | (np.abs(residual) <= tol)
        if np.all(done):
            return x, status

        # derivative is increasing: positive residual means x is right of the root
        hi = np.where(~done & (residual > 0.0), x, hi)
        lo = np.where(~done & (residual < 0.0), x, lo)

        step = residual / second_derivative(kind, x, beta, gamma, alpha)
        candidate = x - step
        outside = ~((candidate > lo) & (candidate < hi))
        midpoint = np.where(hi > 4.0 * lo, np.sqrt(lo * hi), 0.5 * (lo + hi))
        candidate = np.where(outside, midpoint, candidate)

        # resolution floor: the bracket or the step is at machine spacing
        stalled = (hi - lo <= 2.0 * np.spacing(x)) | (np.abs(candidate - x) <= np.spacing(x))
        solving = solving & ~(~done & stalled)
        x = np.where(done | stalled, x, candidate)

    raise NonConvergence(
        "coordinate inversion did not converge",
        iterations=MAX_INVERSION_ITERATIONS,
        worst_residual=float(np.max(np.abs(derivative(kind, x, beta, gamma, alpha) - targets))),
    )


@dataclass(frozen=True)
class CoordinatePotential:
    """One coordinate's regularizer: its kind and parameters."""

    kind: PotentialKind
    beta: float
    gamma: float
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        validate_parameters(self.beta, self.gamma, self.alpha)

    def derivative(self, x):
        return derivative(self.kind, x, self.beta, self.gamma, self.alpha)

    def second_derivative(self, x):
        return second_derivative(self.kind, x, self.beta, self.gamma, self.alpha)

    def value(self, x):
        return value(self.kind, x, self.beta, self.gamma, self.alpha)


def invert_potential(pot: CoordinatePotential, target: float) -> float:
    """
    Return x in (0, 1) with pot.derivative(x) == target.

    Raises OutOfRange when the target is not attained on the clamped domain:
    above the derivative's supremum (finite for tsallis_log_barrier) or below
    its value at DOMAIN_LOWER.
    """
    x, status = invert_derivative(
        pot.kind, np.array([float(target)]), pot.beta, pot.gamma, pot.alpha
    )
    if status[0] != 0:
        bound = "supremum" if status[0] > 0 else "infimum"
        raise OutOfRange(
            f"target beyond the derivative's {bound} on (0, 1)",
            target=target,
            kind=pot.kind.value,
        )
    return float(x[0])
