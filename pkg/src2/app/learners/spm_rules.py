"""
Stateless building blocks of the SPM learners.

Every function here is a closed-form rule: exploration mixing, loss
estimators, the stability term z, the penalty term h, the learning-rate
update and the count-based optimistic predictor. Learners compose them;
tests and lemma checks call them directly.

SPM update:  beta_{t+1} = beta_t + z_t / (beta_t * h_t)
"""
import math

import numpy as np

from ..exceptions import DegeneratePenalty
from ..models.spm import SpmConfig
from ..models.vectors import ProbVector


DEGENERATE_PENALTY = 1e-14


# =============================================================================
# Exponent choice
# =============================================================================
def choose_alpha(num_arms: int, sparsity: int | None = None) -> float:
    """
    Tsallis exponent for K arms, optionally tuned to a known sparsity S.

    S absent, or e^2 S > K:  1 - 1 / (2 ln K)
    e^2 S <= K:              1 - 1 / ln(K / S)
    """
    if num_arms < 3:
        raise ValueError(f"choose_alpha needs K >= 3, got {num_arms}")
    if sparsity is not None:
        if not 1 <= sparsity <= num_arms:
            raise ValueError(f"sparsity must lie in [1, K], got {sparsity}")
        if math.e ** 2 * sparsity <= num_arms:
            return 1.0 - 1.0 / math.log(num_arms / sparsity)
    return 1.0 - 1.0 / (2.0 * math.log(num_arms))


def alpha_tuning_ratio(num_arms: float, alpha: float) -> float:
    """(K^(1-alpha) - 1) / (alpha (1-alpha)); at most 4 ln K for the default alpha."""
    return (num_arms ** (1.0 - alpha) - 1.0) / (alpha * (1.0 - alpha))


# =============================================================================
# Exploration and estimators
# =============================================================================
def mix_exploration(q: ProbVector, num_arms: int, horizon: int) -> ProbVector:
    """p = (1 - K/T) q + 1/T."""
    if horizon < 4 * num_arms:
        raise ValueError(f"horizon {horizon} must be at least 4K = {4 * num_arms}")
    return ProbVector((1.0 - num_arms / horizon) * q.values + 1.0 / horizon)


def estimate_loss_iw(loss: float, p_i: float, chosen: bool) -> float:
    """Importance-weighted estimate: loss / p_i on the played arm, 0 elsewhere."""
    return loss / p_i if chosen else 0.0


def estimate_loss_optimistic(loss: float, m_i: float, p_i: float, chosen: bool) -> float:
    """m_i + (loss - m_i) / p_i on the played arm, m_i elsewhere."""
    return m_i + (loss - m_i) / p_i if chosen else m_i


def iw_estimates(p: ProbVector, arm: int, loss: float) -> np.ndarray:
    estimates = np.zeros(p.k)
    estimates[arm] = estimate_loss_iw(loss, p[arm], True)
    return estimates


def optimistic_estimates(p: ProbVector, prediction: np.ndarray, arm: int, loss: float) -> np.ndarray:
    estimates = np.array(prediction, dtype=float)
    estimates[arm] = estimate_loss_optimistic(loss, float(prediction[arm]), p[arm], True)
    return estimates


# =============================================================================
# Stability terms
# =============================================================================
def spm_z_sparse(p_arm: float, estimate: float, loss: float, beta: float, cfg: SpmConfig) -> float:
    """
    Real-time stability term of the played arm.

    z = min(c * min(p, 1-p)^(2-alpha) * estimate^2,  beta * 18 d^2 / gamma * loss^2)
    with c = (6d)^(2-alpha) / (2(1-alpha)). The optimistic learner passes the
    innovations (estimate - m, loss - m) in place of (estimate, loss).
    """
    tilde = min(p_arm, 1.0 - p_arm)
    stability = cfg.sparse_coefficient * tilde ** (2.0 - cfg.alpha) * estimate ** 2
    capped = beta * cfg.rate_cap * loss ** 2
    return min(stability, capped)


def spm_z_coordinate(p_arm: float, loss: float, prediction: float, beta_arm: float, cfg: SpmConfig) -> float:
    """
    Coordinate-wise stability term of the played arm (zero for every other arm).

    z = (loss - m)^2 * min(c * min(p^-alpha, (1-p)/p^2),  beta_arm * 18 d^2 / gamma)
    """
    shape = min(p_arm ** (-cfg.alpha), (1.0 - p_arm) / p_arm ** 2)
    return (loss - prediction) ** 2 * min(cfg.sparse_coefficient * shape, beta_arm * cfg.rate_cap)


def spm_z_sleeping(p: ProbVector, active: np.ndarray, beta: float, cfg: SpmConfig) -> float:
    """
    Expectation-style stability term over the active set.

    z = min((4d)^(2-alpha) / (1-alpha) * sum_A p~^(1-alpha),  beta * 18 d^2 / gamma * sum_A p~)
    """
    tilde = p.tilde[active]
    return min(
        cfg.sleeping_coefficient * float(np.sum(tilde ** (1.0 - cfg.alpha))),
        beta * cfg.rate_cap * float(np.sum(tilde)),
    )


# =============================================================================
# Penalty terms and the learning-rate update
# =============================================================================
def spm_h_tsallis(p: ProbVector | np.ndarray, alpha: float) -> float:
    """h = (1/alpha) (sum_i p_i^alpha - 1)."""
    values = p.values if isinstance(p, ProbVector) else np.asarray(p, dtype=float)
    return float((np.sum(values ** alpha) - 1.0) / alpha)


def spm_h_coordinate(p: ProbVector, alpha: float) -> np.ndarray:
    """h_i = p_i^alpha / alpha."""
    return p.values ** alpha / alpha


def spm_update_beta(beta: float, z: float, h: float) -> float:
    """beta' = beta + z / (beta h); nondecreasing."""
    if h <= DEGENERATE_PENALTY:
        raise DegeneratePenalty("penalty term too small for the SPM update", beta=beta, z=z, h=h)
    if z < 0.0:
        raise ValueError(f"stability term must be nonnegative, got {z}")
    return beta + z / (beta * h)


# =============================================================================
# Prediction and sampling
# =============================================================================
def cow_predictor(pull_count, loss_sum):
    """m = (1/2 + s) / (1 + n): running mean of observed losses with a 1/2 prior."""
    return (0.5 + np.asarray(loss_sum, dtype=float)) / (1.0 + np.asarray(pull_count, dtype=float))


def sample_arm(p: ProbVector, u: float) -> int:
    """Inverse-CDF draw: the first arm whose cumulative probability exceeds u."""
    cumulative = np.cumsum(p.values)
    arm = int(np.searchsorted(cumulative, u, side="right"))
    if arm >= p.k:
        # rounding left the total just under u; take the last arm with mass
        arm = int(np.flatnonzero(p.values > 0.0)[-1])
    return arm
