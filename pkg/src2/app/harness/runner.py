"""
Experiment runner - one learner against one environment over a horizon grid.

=============================================================================
ONE REPLICATION
=============================================================================

For horizon T and replication r, three independent streams are derived from
(master seed, T, r):

    ENVIRONMENT  materializes the T x K loss matrix (and active sets) up front
    LEARNER      handed to the learner (reservoir schedule, replace index)
    SAMPLING     one uniform per round for inverse-CDF arm sampling

    p   = learner.begin_round(t, A_t)
    I_t = sample_arm(p, u_t)
    log = learner.observe(I_t, l_{t,I_t})
    accumulator.update(I_t, p, l_t, A_t)

Because the loss matrix depends only on its own stream, the same (seed, T, r)
gives every learner the same losses, and a checkpointed replication can
rebuild the matrix instead of storing it.

=============================================================================
MANY REPLICATIONS
=============================================================================

Replications share nothing and run on a ProcessPoolExecutor capped by
SPM_THREADS (inline when the cap is 1). Rows come back in completion order
and are sorted by (T, replication) before anything is written.
=============================================================================
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from ..config.settings import settings
from ..environments.base import LossSchedule
from ..environments.factory import build_environment
from ..environments.metrics import compute_env_metrics
from ..exceptions import ConfigError, IncompatibleLossRange, InvalidRegime
from ..learners.base import BaseLearner
from ..learners.learner_registry import LearnerInfo, LearnerRegistry, default_registry
from ..learners.spm_rules import choose_alpha, sample_arm
from ..models.checkpoint import RunCheckpoint
from ..models.environment import EnvMetrics
from ..models.experiment import ExperimentConfig, LearnerSettings, RegretSummary, ResultRow
from ..models.rounds import RoundLog
from ..models.spm import SpmConfig
from ..observability import telemetry_service
from ..utils.rng import StreamPurpose, make_stream, rng_from_state, rng_state
from .regret import RegretAccumulator, RegretBreakdown, summarize
from .writers import checkpoint_path, roundlog_path, write_checkpoint, write_results, write_roundlog, write_summary


logger = logging.getLogger(__name__)


# =============================================================================
# Configuration checks
# =============================================================================
def build_spm_config(learner: LearnerSettings, num_arms: int, horizon: int) -> SpmConfig:
    """SpmConfig for one horizon; alpha defaults to the K- (or S-) tuned exponent."""
    try:
        alpha = learner.alpha if learner.alpha is not None else choose_alpha(num_arms, learner.sparsity)
        return SpmConfig.defaults(
            num_arms,
            horizon,
            alpha,
            d=learner.d,
            profile=learner.profile,
            beta1=learner.beta1,
            gamma=learner.gamma,
        )
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"cannot configure {learner.id} at T={horizon}: {e}", num_arms=num_arms) from e


def check_pairing(config: ExperimentConfig, registry: LearnerRegistry) -> LearnerInfo:
    """Reject unknown learners and learner / environment loss-range mismatches."""
    learner_id = config.learner.id
    if not registry.has_learner(learner_id):
        raise ConfigError(f"unknown learner '{learner_id}'", available=registry.list_learners())
    info = registry.info(learner_id)

    env = config.env
    if not info.loss_range.contains(env.loss_range):
        raise IncompatibleLossRange(
            f"{learner_id} accepts {info.loss_range.value} losses, {env.kind} emits {env.loss_range.value}",
            learner=learner_id,
            env=env.kind,
        )
    if env.kind == "sleeping" and learner_id != "spm-sleeping":
        raise ConfigError("sleeping environments need the spm-sleeping learner", learner=learner_id)
    return info


def check_compatibility(config: ExperimentConfig, registry: LearnerRegistry) -> LearnerInfo:
    """check_pairing plus the per-horizon SpmConfig and environment regime checks."""
    info = check_pairing(config, registry)
    env = config.env
    for horizon in config.horizons:
        build_spm_config(config.learner, config.num_arms, horizon)
        try:
            build_environment(env, horizon)
        except InvalidRegime as e:
            raise ConfigError(f"{env.kind} at T={horizon}: {e.message}", **e.details) from e
    return info


# =============================================================================
# One replication
# =============================================================================
@dataclass
class ReplicationResult:
    row: ResultRow
    regret: RegretBreakdown
    metrics: EnvMetrics
    schedule: LossSchedule
    spm_config: SpmConfig
    logs: list[RoundLog] | None = None


class ReplicationRunner:
    """
    Plays one (T, r) replication, optionally checkpointing every N rounds.

    Usage:
        runner = ReplicationRunner(config, horizon=4096, replication=0)
        result = runner.run()

        resumed = ReplicationRunner.from_checkpoint(read_checkpoint(path))
        result = resumed.run()
    """

    def __init__(
        self,
        config: ExperimentConfig,
        horizon: int,
        replication: int,
        registry: LearnerRegistry | None = None,
        out_dir: Path | None = None,
    ):
        self.config = config
        self.horizon = horizon
        self.replication = replication
        self.registry = registry or default_registry()
        self.out_dir = None if out_dir is None else Path(out_dir)
        self.info = check_pairing(config, self.registry)

        self.spm_config = build_spm_config(config.learner, config.num_arms, horizon)
        self.environment = build_environment(config.env, horizon)
        self.schedule = self.environment.materialize(self._stream(StreamPurpose.ENVIRONMENT))
        self.learner: BaseLearner = self.registry.get(
            config.learner.id, self.spm_config, self._stream(StreamPurpose.LEARNER)
        )
        self.sampling = self._stream(StreamPurpose.SAMPLING)
        self.accumulator = RegretAccumulator(
            config.num_arms, self.schedule.means, sleeping=self.schedule.active is not None
        )
        self.logs: list[RoundLog] | None = [] if config.capture == "full" else None
        self.round = 0
        self.elapsed = 0.0

    def _stream(self, purpose: StreamPurpose) -> np.random.Generator:
        return make_stream(self.config.seed, self.horizon, self.replication, purpose)

    @classmethod
    def from_checkpoint(
        cls,
        checkpoint: RunCheckpoint,
        registry: LearnerRegistry | None = None,
        out_dir: Path | None = None,
    ) -> "ReplicationRunner":
        """Rebuild the replication and fast-forward it to the checkpointed round."""
        runner = cls(checkpoint.experiment, checkpoint.horizon, checkpoint.replication, registry, out_dir)
        learner_class = runner.registry.info(checkpoint.learner.learner_id).learner_class
        runner.learner = learner_class.from_checkpoint(checkpoint.learner)
        runner.sampling = rng_from_state(checkpoint.sampling_rng_state)
        runner.accumulator.restore(checkpoint.accumulators, checkpoint.pulls)
        runner.round = checkpoint.learner.round
        logger.info("[runner] Resumed T=%d r=%d at round %d", runner.horizon, runner.replication, runner.round)
        return runner

    def checkpoint(self) -> RunCheckpoint:
        accumulators, pulls = self.accumulator.state()
        return RunCheckpoint(
            horizon=self.horizon,
            replication=self.replication,
            master_seed=self.config.seed,
            experiment=self.config,
            learner=self.learner.to_checkpoint(),
            sampling_rng_state=rng_state(self.sampling),
            accumulators=accumulators,
            pulls=pulls,
        )

    def advance(self, until: int) -> None:
        """Play rounds self.round + 1 .. until."""
        until = min(until, self.horizon)
        losses, active = self.schedule.losses, self.schedule.active
        every = self.config.checkpoint_every
        started = time.perf_counter()
        for t in range(self.round + 1, until + 1):
            row = t - 1
            mask = None if active is None else active[row]
            p = self.learner.begin_round(t, mask)
            arm = sample_arm(p, float(self.sampling.random()))
            log = self.learner.observe(arm, float(losses[row, arm]))
            log.expected_loss = self.accumulator.update(arm, p.values, losses[row], mask)
            if self.logs is not None:
                self.logs.append(log)
            self.round = t
            if every and self.out_dir is not None and t % every == 0 and t < self.horizon:
                write_checkpoint(self.checkpoint(), checkpoint_path(self.out_dir, self.horizon, self.replication))
        self.elapsed += time.perf_counter() - started

    def run(self) -> ReplicationResult:
        with telemetry_service.tracer.start_as_current_span("replication.run") as span:
            span.set_attribute("spm.learner", self.config.learner.id)
            span.set_attribute("spm.env", self.config.env.kind)
            span.set_attribute("spm.horizon", self.horizon)
            span.set_attribute("spm.replication", self.replication)
            self.advance(self.horizon)
            result = self._result()
            span.set_attribute("spm.expected_regret", result.row.expected_regret)
        return result

    def _result(self) -> ReplicationResult:
        regret = self.accumulator.result()
        metrics = compute_env_metrics(
            self.schedule.losses,
            means=self.schedule.means,
            alpha=getattr(self.config.env, "alpha", self.spm_config.alpha),
            compute_q_inf=self.config.compute_q_inf,
            bounds=self.schedule.loss_range.bounds,
            pulls=regret.pulls,
        )
        row = ResultRow(
            T=self.horizon,
            replication=self.replication,
            learner=self.config.learner.id,
            env=self.config.env.kind,
            realized_regret=regret.realized,
            expected_regret=regret.expected,
            best_arm=regret.best_arm,
            S_realized=metrics.s_max,
            Q_realized=metrics.q,
            Lstar=metrics.l_star,
            wallclock_ms=self.elapsed * 1000.0 if self.config.timing else None,
            pseudo_regret=regret.pseudo,
            sleeping_regret=regret.sleeping,
            Q_inf=metrics.q_inf,
        )
        return ReplicationResult(
            row=row,
            regret=regret,
            metrics=metrics,
            schedule=self.schedule,
            spm_config=self.spm_config,
            logs=self.logs,
        )


def _play_replication(
    config: ExperimentConfig,
    horizon: int,
    replication: int,
    registry: LearnerRegistry,
    out_dir: Path | None,
) -> ResultRow:
    """Worker task: run one replication and write its round log when captured."""
    result = ReplicationRunner(config, horizon, replication, registry, out_dir).run()
    if result.logs is not None and out_dir is not None:
        write_roundlog(result.logs, roundlog_path(out_dir, horizon, replication))
    return result.row


# =============================================================================
# The whole grid
# =============================================================================
@dataclass
class ExperimentResult:
    rows: list[ResultRow]
    summary: RegretSummary


def run_experiment(
    config: ExperimentConfig,
    out_dir: Path | None = None,
    registry: LearnerRegistry | None = None,
    threads: int | None = None,
) -> ExperimentResult:
    """
    Run every (T, r) pair, write results.csv and summary.json to out_dir.

    Raises ConfigError (or IncompatibleLossRange) before any round is played.
    """
    registry = registry or default_registry()
    check_compatibility(config, registry)
    out_dir = None if out_dir is None else Path(out_dir)
    tasks = [(horizon, r) for horizon in config.horizons for r in range(config.replications)]
    workers = min(threads or settings.spm_threads, len(tasks))

    with telemetry_service.tracer.start_as_current_span("experiment.run") as span:
        span.set_attribute("spm.learner", config.learner.id)
        span.set_attribute("spm.env", config.env.kind)
        span.set_attribute("spm.tasks", len(tasks))
        logger.info(
            "[runner] %s on %s: %d horizons x %d replications, %d worker(s)",
            config.learner.id, config.env.kind, len(config.horizons), config.replications, workers,
        )

        if workers <= 1:
            rows = [_play_replication(config, horizon, r, registry, out_dir) for horizon, r in tasks]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(_play_replication, config, horizon, r, registry, out_dir) for horizon, r in tasks
                ]
                rows = [future.result() for future in futures]

        rows.sort(key=lambda row: (row.T, row.replication))
        for row in rows:
            telemetry_service.count("spm.rounds", row.T, learner=row.learner)
        telemetry_service.count("spm.replications", len(rows), learner=config.learner.id)

        summary = summarize(rows, config)
        if out_dir is not None:
            write_results(rows, out_dir / "results.csv")
            write_summary(summary, out_dir / "summary.json")
    return ExperimentResult(rows=rows, summary=summary)
