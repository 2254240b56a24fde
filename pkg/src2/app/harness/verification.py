"""
`main.py verify` - every numerical check, merged into one report per lemma id.

  lemma1-real-time-spm            random (z, h) sequences and captured hybrid runs
  tsallis-entropy-bound ...       closed-form inequalities over sampled domains
  solver-brute-force / solver-kkt solve_ftrl against grid oracles, K in {2, 3}
  solver-reference                solve_ftrl against nested root finding, K in [4, 8]
  estimator-*-unbiased            exact expectation of both estimators over K outcomes
  stability-ratio ...             trajectory lemmas of every SPM learner
  lower-bound-identities          (eta, epsilon) system on a (K, T, alpha, U) grid
  soft-sparsity-expectation       Monte-Carlo soft sparsity of the soft / lower-bound instances

Each section draws from its own child of the master seed, so reports are
deterministic given (seed, trials) and independent of section order.
"""
import logging

import numpy as np

from ..environments.factory import build_environment
from ..environments.lower_bounds import lower_bound_adv_params
from ..environments.metrics import verify_soft_sparsity
from ..learners.spm_rules import choose_alpha, iw_estimates, optimistic_estimates
from ..models.environment import (
    EnvSpec,
    LowerBoundAdversarialSpec,
    LowerBoundStochasticSpec,
    SleepingSpec,
    SoftSparseSpec,
    SparseAdversarialSpec,
    StochasticGapsSpec,
    VariationBoundedSpec,
)
from ..models.experiment import ExperimentConfig, LearnerSettings
from ..models.reports import LemmaReport
from ..models.vectors import ProbVector
from ..observability import telemetry_service
from ..oracles.brute_force import brute_force_simplex_min, reference_ftrl_solution
from ..oracles.lemma_checks import (
    CLOSED_FORM_TOLERANCE,
    check_lemma1,
    check_lemma1_random,
    check_technical_inequalities,
    check_trajectory_lemmas,
)
from ..solvers.simplex_solver import FtrlProblem, solve_ftrl, stationarity_residual
from ..utils.rng import trial_seeds
from .runner import ReplicationRunner


logger = logging.getLogger(__name__)

DEFAULT_TECHNICAL_TRIALS = 100_000
DEFAULT_TRAJECTORY_ROUNDS = 10_000
LEMMA1_SEQUENCES = 1_000
LEMMA1_HORIZON = 500
SOLVER_INSTANCES = 100
ESTIMATOR_TRIPLES = 1_000
SOFT_SPARSITY_SAMPLES = 100_000

SOLVER_AGREEMENT = 1e-4
REFERENCE_AGREEMENT = 1e-6
KKT_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-9


def _generator(sequence: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(sequence))


# =============================================================================
# Solver agreement
# =============================================================================
def random_problem(rng: np.random.Generator, num_arms: int) -> FtrlProblem:
    """Offsets in [-10, 10] with either potential kind."""
    offsets = rng.uniform(-10.0, 10.0, num_arms)
    gamma = float(rng.uniform(1.0, 10.0))
    alpha = float(rng.uniform(0.1, 0.9))
    if rng.random() < 0.5:
        return FtrlProblem.tsallis_log_barrier(offsets, float(rng.uniform(1.0, 20.0)), gamma, alpha)
    return FtrlProblem.coordinate_wise_hybrid(offsets, rng.uniform(1.0, 20.0, num_arms), gamma, alpha)


def check_solver_agreement(rng: np.random.Generator, instances: int = SOLVER_INSTANCES) -> list[LemmaReport]:
    problems = [random_problem(rng, int(rng.choice([2, 3]))) for _ in range(instances)]
    solutions = [solve_ftrl(problem) for problem in problems]
    gaps = np.array(
        [np.max(np.abs(p.values - brute_force_simplex_min(problem).values)) for problem, p in zip(problems, solutions)]
    )
    residuals = np.array([stationarity_residual(problem, p) for problem, p in zip(problems, solutions)])

    def witness(i: int) -> dict:
        return {"offsets": problems[i].offsets.tolist(), "kind": problems[i].kind.value}

    larger = [random_problem(rng, int(rng.integers(4, 9))) for _ in range(instances)]
    reference_gaps = np.array(
        [np.max(np.abs(solve_ftrl(problem).values - reference_ftrl_solution(problem).values)) for problem in larger]
    )
    return [
        LemmaReport.from_slacks("solver-brute-force", SOLVER_AGREEMENT - gaps, 0.0, witness=witness),
        LemmaReport.from_slacks("solver-kkt", KKT_TOLERANCE - residuals, 0.0, witness=witness),
        LemmaReport.from_slacks(
            "solver-reference",
            REFERENCE_AGREEMENT - reference_gaps,
            0.0,
            witness=lambda i: {"offsets": larger[i].offsets.tolist(), "kind": larger[i].kind.value},
        ),
    ]


# =============================================================================
# Estimators
# =============================================================================
def check_estimator_unbiasedness(rng: np.random.Generator, triples: int = ESTIMATOR_TRIPLES) -> list[LemmaReport]:
    """sum_j p_j * estimate(played=j) equals the true loss vector, for both estimators."""
    iw_slacks, optimistic_slacks = [], []
    for _ in range(triples):
        k = int(rng.integers(2, 11))
        p = ProbVector(rng.dirichlet(np.ones(k)))
        losses = rng.uniform(-1.0, 1.0, k)
        prediction = rng.uniform(-1.0, 1.0, k)
        iw = sum(p[j] * iw_estimates(p, j, losses[j]) for j in range(k))
        optimistic = sum(p[j] * optimistic_estimates(p, prediction, j, losses[j]) for j in range(k))
        iw_slacks.append(-float(np.max(np.abs(iw - losses))))
        optimistic_slacks.append(-float(np.max(np.abs(optimistic - losses))))
    return [
        LemmaReport.from_slacks("estimator-iw-unbiased", np.array(iw_slacks), CLOSED_FORM_TOLERANCE),
        LemmaReport.from_slacks("estimator-optimistic-unbiased", np.array(optimistic_slacks), CLOSED_FORM_TOLERANCE),
    ]


# =============================================================================
# Trajectories
# =============================================================================
def trajectory_cases(rounds: int) -> list[tuple[str, EnvSpec]]:
    """(learner id, environment) pairs whose captured runs are checked."""
    return [
        ("spm-hybrid", StochasticGapsSpec(num_arms=8, delta_min=0.25)),
        ("spm-hybrid", SparseAdversarialSpec(num_arms=8, sparsity=2)),
        ("spm-hybrid", LowerBoundStochasticSpec(num_arms=16, alpha=choose_alpha(16), U=2.0)),
        ("spm-coordinate-wise", StochasticGapsSpec(num_arms=8, delta_min=0.25)),
        ("spm-sleeping", SleepingSpec(num_arms=8)),
        ("spm-optimistic-reservoir", VariationBoundedSpec(num_arms=8, q_target=rounds / 100.0)),
    ]


def check_trajectories(seed: int, rounds: int = DEFAULT_TRAJECTORY_ROUNDS) -> list[LemmaReport]:
    reports = []
    for learner_id, env in trajectory_cases(rounds):
        config = ExperimentConfig(
            learner=LearnerSettings(id=learner_id), env=env, horizons=[rounds], seed=seed, capture="full"
        )
        result = ReplicationRunner(config, rounds, 0).run()
        logger.info("[verify] Captured %s on %s (%d rounds)", learner_id, env.kind, rounds)
        reports.extend(
            check_trajectory_lemmas(result.logs, learner_id, result.spm_config, losses=result.schedule.losses)
        )
        if learner_id == "spm-hybrid":
            # rounds with a held learning rate do not enter the recursion
            updates = [log for log in result.logs if log.warning is None]
            reports.append(
                check_lemma1([log.z for log in updates], [log.h for log in updates], result.spm_config.beta1)
            )
    return reports


# =============================================================================
# Lower-bound instances
# =============================================================================
def lower_bound_grid() -> list[tuple[int, int, float, float]]:
    """(K, T, alpha, U) points with 1 <= U <= K^alpha / 8."""
    points = []
    for num_arms in (64, 256, 1024, 4096):
        for horizon in (2 ** 15, 2 ** 18):
            for alpha in (0.5, 0.6, 0.7, 0.8, 0.9):
                ceiling = num_arms ** alpha / 8.0
                for level in sorted({1.0, max(1.0, ceiling / 2.0), ceiling}):
                    points.append((num_arms, horizon, alpha, level))
    return points


def check_lower_bound_identities() -> LemmaReport:
    points = lower_bound_grid()
    slacks = []
    for num_arms, horizon, alpha, level in points:
        params = lower_bound_adv_params(num_arms, horizon, alpha, level)
        slacks.append(
            min(
                IDENTITY_TOLERANCE - abs(params.soft_sparsity_residual),
                IDENTITY_TOLERANCE - abs(params.information_residual),
                params.sum_slack,
                params.half_u_slack + CLOSED_FORM_TOLERANCE,
            )
        )
    return LemmaReport.from_slacks(
        "lower-bound-identities",
        np.array(slacks),
        0.0,
        witness=lambda i: dict(zip(("K", "T", "alpha", "U"), points[i])),
    )


def check_soft_sparsity(seed: int, samples: int = SOFT_SPARSITY_SAMPLES) -> LemmaReport:
    """Each construction's mean statistic minus 3 standard errors stays below U."""
    alpha = choose_alpha(64)
    level = 2.0
    specs = [
        LowerBoundStochasticSpec(num_arms=64, alpha=alpha, U=level),
        LowerBoundAdversarialSpec(num_arms=64, alpha=alpha, U=level),
        SoftSparseSpec(num_arms=64, alpha=alpha, U=level),
    ]
    rngs = [_generator(s) for s in trial_seeds(seed, len(specs))]
    slacks, kinds = [], []
    for spec, rng in zip(specs, rngs):
        losses = build_environment(spec, samples).materialize(rng).losses
        report = verify_soft_sparsity(losses, alpha, level)
        slacks.append(level - report.lower)
        kinds.append(spec.kind)
    return LemmaReport.from_slacks(
        "soft-sparsity-expectation", np.array(slacks), 0.0, witness=lambda i: {"env": kinds[i]}
    )


# =============================================================================
# Orchestration
# =============================================================================
def run_verification(
    trials: int = DEFAULT_TECHNICAL_TRIALS,
    seed: int = 0,
    trajectory_rounds: int = DEFAULT_TRAJECTORY_ROUNDS,
) -> list[LemmaReport]:
    """All checks, merged per lemma id, in first-seen order."""
    lemma1_seq, technical_seq, solver_seq, estimator_seq, sparsity_seq = trial_seeds(seed, 5)
    reports: list[LemmaReport] = [check_lemma1_random(LEMMA1_SEQUENCES, LEMMA1_HORIZON, _generator(lemma1_seq))]
    reports.extend(check_technical_inequalities(trials, _generator(technical_seq)))
    reports.extend(check_solver_agreement(_generator(solver_seq)))
    reports.extend(check_estimator_unbiasedness(_generator(estimator_seq)))
    reports.extend(check_trajectories(seed, trajectory_rounds))
    reports.append(check_lower_bound_identities())
    reports.append(check_soft_sparsity(int(sparsity_seq.generate_state(1)[0])))

    merged: dict[str, LemmaReport] = {}
    for report in reports:
        merged[report.lemma_id] = merged[report.lemma_id].merge(report) if report.lemma_id in merged else report

    for report in merged.values():
        with telemetry_service.tracer.start_as_current_span("verify.lemma") as span:
            span.set_attribute("spm.lemma_id", report.lemma_id)
            span.set_attribute("spm.trials", report.trials)
            span.set_attribute("spm.violations", report.violations)
        telemetry_service.count("spm.lemma_violations", report.violations, lemma=report.lemma_id)
        log = logger.info if report.passed else logger.error
        log(
            "[verify] %s: %d trials, %d violations, worst slack %.3e",
            report.lemma_id, report.trials, report.violations, report.worst_slack,
        )
    return list(merged.values())

