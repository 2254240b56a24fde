"""
Data-dependent quantities of a realized loss matrix.

  S_max   largest ||l_t||_0
  soft    mean over rounds of (sum_i |l_{t,i}|^(2/alpha))^alpha
  Q       sum_t ||l_t - mean_s l_s||_2^2
  Q_inf   min over anchors a of sum_t ||l_t - a||_inf^2   (grid upper estimate)
  L*      min_i sum_t l_{t,i}
"""
import logging

import numpy as np

from ..models.environment import EnvMetrics, SoftSparsityReport


logger = logging.getLogger(__name__)

COARSE_STEP = 1e-2
FINE_STEP = 1e-3
MAX_SWEEPS = 3
MIN_SOFT_SPARSITY_SAMPLES = 10_000


def total_variation(losses: np.ndarray) -> float:
    centered = losses - losses.mean(axis=0)
    return float(np.sum(centered * centered))


def soft_sparsity_statistic(losses: np.ndarray, alpha: float) -> np.ndarray:
    """Per-row (sum_i |l_i|^(2/alpha))^alpha."""
    return np.sum(np.abs(losses) ** (2.0 / alpha), axis=-1) ** alpha


def max_norm_variation(losses: np.ndarray, bounds: tuple[float, float] = (0.0, 1.0)) -> float:
    """
    Coordinate descent for Q_inf from the column means.

    Each coordinate is scanned on a COARSE_STEP grid over `bounds`, then on a
    FINE_STEP grid around the best coarse point, holding the others fixed.
    The result is attained by some anchor, so it is an upper estimate.
    """
    lo, hi = bounds
    anchor = np.clip(losses.mean(axis=0), lo, hi)
    deviation = np.abs(losses - anchor)
    best = float(np.sum(deviation.max(axis=1) ** 2))

    coarse = np.linspace(lo, hi, int(round((hi - lo) / COARSE_STEP)) + 1)
    for _ in range(MAX_SWEEPS):
        improved = False
        for i in range(losses.shape[1]):
            others = np.delete(deviation, i, axis=1).max(axis=1) if losses.shape[1] > 1 else np.zeros(len(losses))
            value, objective = _scan(losses[:, i], others, coarse)
            fine = np.clip(np.arange(value - COARSE_STEP, value + COARSE_STEP + FINE_STEP / 2, FINE_STEP), lo, hi)
            value, objective = _scan(losses[:, i], others, np.append(fine, anchor[i]))
            if objective < best - 1e-12 * max(1.0, best):
                best = objective
                anchor[i] = value
                deviation[:, i] = np.abs(losses[:, i] - value)
                improved = True
        if not improved:
            break
    return best


def _scan(column: np.ndarray, others: np.ndarray, grid: np.ndarray) -> tuple[float, float]:
    per_round = np.maximum(np.abs(column[:, None] - grid[None, :]), others[:, None])
    objectives = np.sum(per_round * per_round, axis=0)
    j = int(np.argmin(objectives))
    return float(grid[j]), float(objectives[j])


def compute_env_metrics(
    losses: np.ndarray,
    means: np.ndarray | None = None,
    alpha: float | None = None,
    compute_q_inf: bool = False,
    bounds: tuple[float, float] = (0.0, 1.0),
    pulls: np.ndarray | None = None,
) -> EnvMetrics:
    cumulative = losses.sum(axis=0)
    best_arm = int(np.argmin(cumulative))
    delta_min = None
    if means is not None:
        gaps = np.asarray(means) - np.min(means)
        positive = gaps[gaps > 0.0]
        delta_min = float(positive.min()) if positive.size else 0.0
    q_inf = max_norm_variation(losses, bounds) if compute_q_inf else None
    return EnvMetrics(
        s_max=int(np.count_nonzero(losses, axis=1).max()),
        soft_sparsity=None if alpha is None else float(soft_sparsity_statistic(losses, alpha).mean()),
        q=total_variation(losses),
        q_inf=q_inf,
        l_star=float(cumulative[best_arm]),
        best_arm=best_arm,
        delta_min=delta_min,
        per_arm_pulls=None if pulls is None else [int(n) for n in pulls],
    )


def verify_soft_sparsity(samples: np.ndarray, alpha: float, soft_sparsity: float) -> SoftSparsityReport:
    """Monte-Carlo mean of the soft-sparsity statistic with its standard error."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] < MIN_SOFT_SPARSITY_SAMPLES:
        raise ValueError(f"need at least {MIN_SOFT_SPARSITY_SAMPLES} samples, got {samples.shape[0]}")
    statistic = soft_sparsity_statistic(samples, alpha)
    report = SoftSparsityReport(
        samples=int(statistic.size),
        alpha=alpha,
        U=soft_sparsity,
        mean=float(statistic.mean()),
        standard_error=float(statistic.std(ddof=1) / np.sqrt(statistic.size)),
    )
    if report.violated:
        logger.warning("[metrics] soft sparsity %.6g +- %.2g exceeds U=%.6g", report.mean, report.standard_error, soft_sparsity)
    return report
