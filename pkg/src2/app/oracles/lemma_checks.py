"""
Numerical checks of the stability lemmas and technical inequalities.

Each check turns a bound into per-trial (or per-round) slacks, bound minus
quantity, and folds them into a LemmaReport. Closed-form inequalities use a
1e-12 tolerance, trajectory inequalities that involve solver output 1e-8.
The arithmetic here is written out independently of app.learners, so a
wrong rule there shows up as a violation rather than cancelling out.

Lemma ids:
  lemma1-real-time-spm        F <= G + max(z/beta) log_sqrt2(beta'_{T+1} / beta'_1)
  tsallis-entropy-bound       x^alpha >= (x - 1) ln(1 - x)
  power-subadditive           a^x + b^x >= (a + b)^x,  x in [0, 1]
  power-superadditive         a^x + b^x <= (a + b)^x,  x >= 1
  barrier-halving             g(x) - 1 >= g(2x),  g(x) = beta x^(alpha-1) + gamma/x, gamma >= 2
  bernoulli-kl-doubling       KL(p || 2p) <= p,  p in (0, 1/4]
  alpha-tuning                (K^(1-alpha) - 1) / (alpha (1-alpha)) <= 4 ln K
  stability-ratio             q_{t+1,i} <= c d q_{t,i}   (c = 3, or 4 for sleeping)
  beta-increment              beta_{t+1} - beta_t <= (1 - 1/d) gamma q_*^(-alpha)
  beta-monotone               beta_{t+1} >= beta_t
  penalty-floor               h_t >= (1 - alpha) / (4 alpha) T^(-alpha)
  sparse-stability-cap        E_I[z_t] <= (6d)^(2-alpha) / (2(1-alpha)) S^alpha
  rate-cap                    z_t / beta_t <= 18 d^2 / gamma
  coordinate-discipline       beta_{t+1,i} = beta_{t,i} for i != I_t
  coordinate-penalty          logged h_{t,i} = p_{t,i}^alpha / alpha
  coordinate-penalty-growth   h_{t+1,I} <= 6^alpha h_{t,I} when q_{t+1,I} <= 6 q_{t,I}
  sleeping-support            p_t sums to 1 over A_t and vanishes off A_t
  filtering-identity          <l^_t, q_t> = l_{t,I_t}
"""
import math
from typing import Sequence

import numpy as np
from scipy.special import rel_entr

from ..exceptions import MissingCapture
from ..models.reports import LemmaReport
from ..models.rounds import RoundLog
from ..models.spm import SpmConfig


CLOSED_FORM_TOLERANCE = 1e-12
TRAJECTORY_TOLERANCE = 1e-8
FILTERING_TOLERANCE = 1e-10
MIN_TECHNICAL_TRIALS = 10_000
SAMPLE_EDGE = 1e-9


# =============================================================================
# Learning-rate lemma
# =============================================================================
def check_lemma1(z: Sequence[float], h: Sequence[float], beta1: float) -> LemmaReport:
    """
    Recompute beta_t from (z, h) and check the proof inequality exactly.

    Details carry F, G, the bound and |E|, the number of rounds in which
    beta' grows by at least sqrt(2).
    """
    z = np.asarray(z, dtype=float)
    h = np.asarray(h, dtype=float)
    if z.shape != h.shape or z.ndim != 1 or z.size == 0:
        raise ValueError("z and h must be nonempty sequences of equal length")
    if np.any(z < 0.0) or np.any(h <= 0.0) or beta1 <= 0.0:
        raise ValueError("need z >= 0, h > 0 and beta1 > 0")

    betas = np.empty(z.size)
    beta = beta1
    for t in range(z.size):
        betas[t] = beta
        beta = beta + z[t] / (beta * h[t])

    ratio = z / h
    cumulative = np.cumsum(ratio)
    with np.errstate(divide="ignore", invalid="ignore"):
        g_terms = np.where(z > 0.0, z / np.sqrt(cumulative), 0.0)
    f_value = math.fsum(z / betas)
    g_value = math.fsum(g_terms)

    primes = np.sqrt(beta1 ** 2 + 2.0 * np.concatenate(([0.0], cumulative)))
    doublings = int(np.sum(primes[1:] >= math.sqrt(2.0) * primes[:-1]))
    growth = math.log(primes[-1] / primes[0]) / math.log(math.sqrt(2.0))
    bound = g_value + float(np.max(z / betas)) * growth

    slack = (bound - f_value) / max(1.0, f_value)
    return LemmaReport.from_slacks(
        "lemma1-real-time-spm",
        np.array([slack]),
        CLOSED_FORM_TOLERANCE,
        witness=lambda _: {"beta1": beta1, "T": int(z.size), "F": f_value, "bound": bound},
        F=f_value,
        G=g_value,
        bound=bound,
        doublings=float(doublings),
    )


def check_lemma1_random(
    trials: int, horizon: int, rng: np.random.Generator, beta1: float = 1.0
) -> LemmaReport:
    """z ~ Unif[0, 5], h ~ Unif[0.1, 2] sequences, merged into one report."""
    report = LemmaReport(lemma_id="lemma1-real-time-spm", tolerance=CLOSED_FORM_TOLERANCE)
    for _ in range(trials):
        z = rng.uniform(0.0, 5.0, horizon)
        h = rng.uniform(0.1, 2.0, horizon)
        trial = check_lemma1(z, h, beta1)
        trial.details = {}
        report = report.merge(trial)
    return report


# =============================================================================
# Technical inequalities
# =============================================================================
def check_technical_inequalities(trials: int, rng: np.random.Generator) -> list[LemmaReport]:
    """Uniform samples over each inequality's domain, one report per inequality."""
    if trials < MIN_TECHNICAL_TRIALS:
        raise ValueError(f"need at least {MIN_TECHNICAL_TRIALS} trials, got {trials}")
    tol = CLOSED_FORM_TOLERANCE
    reports = []

    x = rng.uniform(SAMPLE_EDGE, 1.0 - SAMPLE_EDGE, trials)
    alpha = rng.uniform(SAMPLE_EDGE, 1.0 - SAMPLE_EDGE, trials)
    slack = x ** alpha - (x - 1.0) * np.log1p(-x)
    reports.append(
        LemmaReport.from_slacks(
            "tsallis-entropy-bound", slack, tol, witness=lambda i: {"x": x[i], "alpha": alpha[i]}
        )
    )

    a = rng.uniform(SAMPLE_EDGE, 10.0, trials)
    b = rng.uniform(SAMPLE_EDGE, 10.0, trials)
    low_power = rng.uniform(0.0, 1.0, trials)
    scale = np.maximum(1.0, (a + b) ** low_power)
    slack = (a ** low_power + b ** low_power - (a + b) ** low_power) / scale
    reports.append(
        LemmaReport.from_slacks(
            "power-subadditive", slack, tol, witness=lambda i: {"a": a[i], "b": b[i], "x": low_power[i]}
        )
    )

    high_power = rng.uniform(1.0, 3.0, trials)
    scale = np.maximum(1.0, (a + b) ** high_power)
    slack = ((a + b) ** high_power - a ** high_power - b ** high_power) / scale
    reports.append(
        LemmaReport.from_slacks(
            "power-superadditive", slack, tol, witness=lambda i: {"a": a[i], "b": b[i], "x": high_power[i]}
        )
    )

    beta = rng.uniform(1.0, 100.0, trials)
    gamma = rng.uniform(2.0, 100.0, trials)
    xg = rng.uniform(SAMPLE_EDGE, 1.0, trials)

    def g(v):
        return beta * v ** (alpha - 1.0) + gamma / v

    slack = (g(xg) - 1.0 - g(2.0 * xg)) / np.maximum(1.0, g(xg))
    reports.append(
        LemmaReport.from_slacks(
            "barrier-halving",
            slack,
            tol,
            witness=lambda i: {"x": xg[i], "beta": beta[i], "gamma": gamma[i], "alpha": alpha[i]},
        )
    )

    p = rng.uniform(SAMPLE_EDGE, 0.25, trials)
    kl = rel_entr(p, 2.0 * p) + rel_entr(1.0 - p, 1.0 - 2.0 * p)
    reports.append(LemmaReport.from_slacks("bernoulli-kl-doubling", p - kl, tol, witness=lambda i: {"p": p[i]}))

    k = np.exp(rng.uniform(math.log(3.0), math.log(1e6), trials))
    tuned = 1.0 - 1.0 / (2.0 * np.log(k))
    ratio = (k ** (1.0 - tuned) - 1.0) / (tuned * (1.0 - tuned))
    slack = (4.0 * np.log(k) - ratio) / np.maximum(1.0, 4.0 * np.log(k))
    reports.append(LemmaReport.from_slacks("alpha-tuning", slack, tol, witness=lambda i: {"K": k[i]}))
    return reports


# =============================================================================
# Trajectory checks
# =============================================================================
def _require(logs: Sequence[RoundLog], *fields: str, rounds: Sequence[RoundLog] | None = None) -> None:
    for log in rounds if rounds is not None else logs:
        missing = [name for name in fields if getattr(log, name) is None]
        if missing:
            raise MissingCapture("round logs lack fields needed by the check", round=log.t, missing=missing)


def _stack(logs: Sequence[RoundLog], name: str) -> np.ndarray:
    return np.array([np.asarray(getattr(log, name), dtype=float) for log in logs])


def _stability_ratio(logs: Sequence[RoundLog], factor: float) -> LemmaReport:
    q = _stack(logs, "q")
    if len(q) < 2:
        return LemmaReport(lemma_id="stability-ratio", tolerance=TRAJECTORY_TOLERANCE)
    slack = (factor * q[:-1] - q[1:]) / np.maximum(1.0, factor * q[:-1])
    return LemmaReport.from_slacks(
        "stability-ratio",
        slack,
        TRAJECTORY_TOLERANCE,
        witness=lambda i: {"round": logs[i // q.shape[1]].t, "arm": i % q.shape[1]},
        factor=factor,
    )


def _beta_monotone(logs: Sequence[RoundLog]) -> LemmaReport:
    before = np.concatenate([np.ravel(log.beta) for log in logs])
    after = np.concatenate([np.ravel(log.beta_next) for log in logs])
    return LemmaReport.from_slacks("beta-monotone", after - before, 0.0)


def _penalty_floor(logs: Sequence[RoundLog], cfg: SpmConfig) -> LemmaReport:
    h = np.array([float(np.sum(log.h)) if np.ndim(log.h) else float(log.h) for log in logs])
    return LemmaReport.from_slacks(
        "penalty-floor",
        h - cfg.penalty_floor,
        CLOSED_FORM_TOLERANCE,
        witness=lambda i: {"round": logs[i].t, "h": h[i]},
        floor=cfg.penalty_floor,
    )


def _rate_cap(logs: Sequence[RoundLog], cfg: SpmConfig) -> LemmaReport:
    cap = 18.0 * cfg.d ** 2 / cfg.gamma
    ratios = np.array([log.z / float(np.ravel(log.beta)[log.arm if np.ndim(log.beta) else 0]) for log in logs])
    return LemmaReport.from_slacks(
        "rate-cap", (cap - ratios) / cap, CLOSED_FORM_TOLERANCE, witness=lambda i: {"round": logs[i].t}, cap=cap
    )


def _beta_increment(logs: Sequence[RoundLog], cfg: SpmConfig) -> LemmaReport:
    slacks = []
    for log in logs:
        top = float(np.max(log.q))
        q_star = min(top, 1.0 - top)
        bound = (1.0 - 1.0 / cfg.d) * cfg.gamma * q_star ** (-cfg.alpha)
        slacks.append((bound - (log.beta_next - log.beta)) / max(1.0, bound))
    return LemmaReport.from_slacks(
        "beta-increment", np.array(slacks), TRAJECTORY_TOLERANCE, witness=lambda i: {"round": logs[i].t}
    )


def _sparse_stability_cap(
    logs: Sequence[RoundLog], cfg: SpmConfig, losses: np.ndarray, sparsity: int | None
) -> LemmaReport:
    """Exact expectation over the K possible draws of I_t against the true l_t."""
    alpha, d, gamma = cfg.alpha, cfg.d, cfg.gamma
    coefficient = (6.0 * d) ** (2.0 - alpha) / (2.0 * (1.0 - alpha))
    slacks = []
    for log in logs:
        p = np.asarray(log.p, dtype=float)
        row = losses[log.t - 1]
        tilde = np.minimum(p, 1.0 - p)
        per_arm = np.minimum(
            coefficient * tilde ** (2.0 - alpha) * (row / p) ** 2,
            log.beta * 18.0 * d ** 2 / gamma * row ** 2,
        )
        expected = float(np.dot(p, per_arm))
        support = sparsity if sparsity is not None else int(np.count_nonzero(row))
        bound = coefficient * support ** alpha
        slacks.append((bound - expected) / max(1.0, bound))
    return LemmaReport.from_slacks(
        "sparse-stability-cap", np.array(slacks), TRAJECTORY_TOLERANCE, witness=lambda i: {"round": logs[i].t}
    )


def _coordinate_discipline(logs: Sequence[RoundLog]) -> LemmaReport:
    slacks = []
    for log in logs:
        moved = np.asarray(log.beta_next) != np.asarray(log.beta)
        moved[log.arm] = False
        slacks.append(-float(moved.sum()))
    return LemmaReport.from_slacks("coordinate-discipline", np.array(slacks), 0.0, witness=lambda i: {"round": logs[i].t})


def _coordinate_penalty(logs: Sequence[RoundLog], cfg: SpmConfig) -> LemmaReport:
    slacks = []
    for log in logs:
        expected = np.asarray(log.p) ** cfg.alpha / cfg.alpha
        slacks.append(-float(np.max(np.abs(np.asarray(log.h) - expected) / np.maximum(1.0, expected))))
    return LemmaReport.from_slacks("coordinate-penalty", np.array(slacks), CLOSED_FORM_TOLERANCE)


def _coordinate_penalty_growth(logs: Sequence[RoundLog], cfg: SpmConfig) -> LemmaReport:
    slacks = []
    for current, following in zip(logs[:-1], logs[1:]):
        arm = current.arm
        if following.q[arm] > 6.0 * current.q[arm]:
            continue
        bound = 6.0 ** cfg.alpha * current.h[arm]
        slacks.append((bound - following.h[arm]) / max(1.0, bound))
    return LemmaReport.from_slacks("coordinate-penalty-growth", np.array(slacks), TRAJECTORY_TOLERANCE)


def _sleeping_support(logs: Sequence[RoundLog]) -> LemmaReport:
    slacks = []
    for log in logs:
        p = np.asarray(log.p)
        off = float(np.abs(p[~log.active]).sum())
        total = abs(float(p[log.active].sum()) - 1.0)
        slacks.append(-(off + total))
    return LemmaReport.from_slacks("sleeping-support", np.array(slacks), FILTERING_TOLERANCE)


def _filtering_identity(logs: Sequence[RoundLog]) -> LemmaReport:
    slacks = np.array([-abs(float(np.dot(log.loss_estimate, log.q)) - log.loss) for log in logs])
    return LemmaReport.from_slacks(
        "filtering-identity", slacks, FILTERING_TOLERANCE, witness=lambda i: {"round": logs[i].t}
    )


def check_trajectory_lemmas(
    logs: Sequence[RoundLog],
    learner_id: str,
    config: SpmConfig,
    losses: np.ndarray | None = None,
    sparsity: int | None = None,
) -> list[LemmaReport]:
    """
    Per-round assertions for one learner's captured trajectory.

    `losses` is the environment's full T x K matrix; the hybrid learner's
    expected stability cap needs it. `sparsity` fixes S; by default each
    round uses its own number of nonzero losses.
    """
    if not logs:
        raise MissingCapture("no round logs to check", learner_id=learner_id)

    if learner_id == "spm-hybrid":
        _require(logs, "q")
        if losses is None:
            raise MissingCapture("the stability cap needs the true loss matrix", learner_id=learner_id)
        return [
            _stability_ratio(logs, 3.0 * config.d),
            _beta_increment(logs, config),
            _beta_monotone(logs),
            _penalty_floor(logs, config),
            _sparse_stability_cap(logs, config, losses, sparsity),
            _rate_cap(logs, config),
        ]

    if learner_id == "spm-coordinate-wise":
        _require(logs, "q")
        return [
            _stability_ratio(logs, 3.0 * config.d),
            _coordinate_discipline(logs),
            _coordinate_penalty(logs, config),
            _coordinate_penalty_growth(logs, config),
            _beta_monotone(logs),
            _rate_cap(logs, config),
        ]

    if learner_id == "spm-sleeping":
        _require(logs, "q", "active", "loss_estimate")
        return [
            _stability_ratio(logs, 4.0 * config.d),
            _sleeping_support(logs),
            _filtering_identity(logs),
            _beta_monotone(logs),
        ]

    if learner_id == "spm-optimistic-reservoir":
        ftrl_rounds = [log for log in logs if not log.exploration]
        _require(logs, "q", rounds=ftrl_rounds)
        return [
            _stability_ratio(ftrl_rounds, 4.0 * config.d),
            _beta_monotone(logs),
            _penalty_floor(ftrl_rounds, config),
            _rate_cap(ftrl_rounds, config),
        ]

    raise ValueError(f"no trajectory lemmas for learner '{learner_id}'")
