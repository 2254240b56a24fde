"""
Unit tests for the experiment harness.

These tests verify that:
1. Regret figures match hand computations
2. Summaries aggregate replications per horizon
3. Incompatible or invalid experiments are rejected before any round is played
4. Same seed gives byte-identical results, inline or on worker processes
5. A replication resumed from a checkpoint ends exactly where an
   uninterrupted one does
6. Artifacts carry the documented columns

RUN: pytest src2/app/tests/test_harness.py -v
"""
import json

import numpy as np
import pandas as pd
import pytest

from app.exceptions import ConfigError, IncompatibleLossRange
from app.harness import (
    RegretAccumulator,
    ReplicationRunner,
    compute_regret,
    run_experiment,
    summarize,
)
from app.harness.runner import check_compatibility
from app.harness.writers import (
    checkpoint_path,
    load_config_dict,
    read_checkpoint,
    read_results,
    read_summary,
    roundlog_path,
    validate_config,
    write_checkpoint,
)
from app.learners import default_registry
from app.models import ExperimentConfig, LearnerSettings, RoundLog
from app.models.experiment import EXTRA_RESULT_COLUMNS, RESULT_COLUMNS


def experiment(learner="spm-hybrid", **overrides):
    data = {
        "learner": {"id": learner},
        "env": {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.2},
        "horizons": [64],
        "replications": 1,
        "seed": 3,
    }
    data.update(overrides)
    return ExperimentConfig.model_validate(data)


class TestRegretAccumulator:
    """Regret figures on small hand-checked trajectories."""

    LOSSES = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])

    def test_expected_regret_by_hand(self):
        accumulator = RegretAccumulator(2)
        for row, arm in zip(self.LOSSES, [0, 1, 0]):
            assert accumulator.update(arm, np.array([0.5, 0.5]), row) == 0.5
        regret = accumulator.result()
        assert regret.expected == pytest.approx(0.5)
        assert regret.realized == pytest.approx(2.0)
        assert regret.best_arm == 1
        assert regret.pulls.tolist() == [2, 1]
        assert regret.pseudo is None and regret.sleeping is None

    def test_pseudo_regret(self):
        accumulator = RegretAccumulator(2, means=np.array([0.2, 0.6]))
        for row in self.LOSSES:
            accumulator.update(0, np.array([0.5, 0.5]), row)
        assert accumulator.result().pseudo == pytest.approx(3 * 0.4 - 3 * 0.2)

    def test_single_active_arm_has_no_sleeping_regret(self):
        accumulator = RegretAccumulator(3, sleeping=True)
        rng = np.random.default_rng(0)
        for t in range(20):
            arm = t % 3
            active = np.arange(3) == arm
            accumulator.update(arm, active.astype(float), rng.random(3), active)
        assert accumulator.result().sleeping == 0.0

    def test_sleeping_regret_counts_active_rounds_only(self):
        accumulator = RegretAccumulator(2, sleeping=True)
        accumulator.update(0, np.array([1.0, 0.0]), np.array([1.0, 0.0]), np.array([True, True]))
        accumulator.update(0, np.array([1.0, 0.0]), np.array([1.0, 0.0]), np.array([True, False]))
        regret = accumulator.result()
        np.testing.assert_allclose(regret.sleeping_per_action, [0.0, 1.0])
        assert regret.sleeping == 1.0

    def test_state_round_trip(self):
        accumulator = RegretAccumulator(2, means=np.array([0.1, 0.2]), sleeping=True)
        accumulator.update(1, np.array([0.3, 0.7]), np.array([0.2, 0.9]), np.array([True, True]))
        copy = RegretAccumulator(2, means=np.array([0.1, 0.2]), sleeping=True)
        copy.restore(*json.loads(json.dumps(accumulator.state())))
        assert copy.result().expected == accumulator.result().expected
        np.testing.assert_array_equal(copy.result().sleeping_per_action, accumulator.result().sleeping_per_action)

    def test_compute_regret_from_logs(self):
        logs = [
            RoundLog(t=t, arm=arm, loss=float(self.LOSSES[t - 1, arm]), p=np.array([0.5, 0.5]),
                     beta=1.0, beta_next=1.0, z=0.0, h=1.0)
            for t, arm in [(1, 0), (2, 1), (3, 0)]
        ]
        assert compute_regret(logs, self.LOSSES).expected == pytest.approx(0.5)


class TestSummarize:
    """Per-horizon aggregation."""

    def test_single_replication_has_no_standard_error(self):
        result = run_experiment(experiment())
        summary = result.summary.at(64)
        assert summary.replications == 1
        assert summary.expected_se is None and summary.realized_se is None
        assert summary.expected_mean == result.rows[0].expected_regret

    def test_means_and_ratios(self, stochastic_experiment):
        result = run_experiment(stochastic_experiment)
        rows = [row for row in result.rows if row.T == 128]
        summary = result.summary.at(128)
        assert summary.expected_mean == pytest.approx(np.mean([row.expected_regret for row in rows]))
        assert summary.expected_se is not None
        assert summary.ratios["log"] == pytest.approx(summary.expected_mean / np.log(128))
        assert summary.pseudo_mean is not None
        assert summary.sleeping_mean is None

    def test_zero_variation_ratio_is_none(self):
        config = experiment(env={"kind": "scripted", "num_arms": 4, "losses": [[0.0] * 4] * 64})
        summary = summarize(run_experiment(config).rows, config).at(64)
        assert summary.ratios["variation"] is None
        assert summary.ratios["sparse"] is None

    def test_unknown_horizon(self):
        with pytest.raises(KeyError):
            run_experiment(experiment()).summary.at(128)


class TestCompatibility:
    """Configuration errors raised before any round."""

    def test_unit_learner_on_signed_losses(self):
        config = experiment("exp3", env={"kind": "sparse_adversarial", "num_arms": 4, "sparsity": 2})
        with pytest.raises(IncompatibleLossRange):
            run_experiment(config)

    def test_incompatible_range_is_a_config_error(self):
        assert issubclass(IncompatibleLossRange, ConfigError)

    def test_unknown_learner(self):
        with pytest.raises(ConfigError):
            run_experiment(experiment("ucb"))

    def test_sleeping_env_needs_sleeping_learner(self):
        with pytest.raises(ConfigError):
            run_experiment(experiment(env={"kind": "sleeping", "num_arms": 4}))

    def test_horizon_too_short(self):
        with pytest.raises(ConfigError):
            check_compatibility(experiment(horizons=[8]), default_registry())

    def test_invalid_lower_bound_regime(self):
        config = experiment(env={"kind": "lower_bound_stochastic", "num_arms": 3, "alpha": 0.5, "U": 1.0})
        with pytest.raises(ConfigError):
            run_experiment(config)

    def test_scripted_matrix_shorter_than_horizon(self):
        config = experiment(env={"kind": "scripted", "num_arms": 4, "losses": [[0.0] * 4] * 20})
        with pytest.raises(ConfigError):
            run_experiment(config)


class TestRunExperiment:
    """End-to-end runs on small grids."""

    def test_zero_losses_give_zero_regret(self):
        config = experiment(env={"kind": "scripted", "num_arms": 4, "losses": [[0.0] * 4] * 64})
        row = run_experiment(config).rows[0]
        assert row.expected_regret == 0.0
        assert row.realized_regret == 0.0
        assert row.S_realized == 0

    @pytest.mark.parametrize("learner, env", [
        ("spm-hybrid", {"kind": "sparse_adversarial", "num_arms": 6, "sparsity": 2}),
        ("spm-coordinate-wise", {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.3}),
        ("spm-sleeping", {"kind": "sleeping", "num_arms": 4}),
        ("spm-optimistic-reservoir", {"kind": "variation_bounded", "num_arms": 4, "q_target": 2.0}),
        ("exp3", {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.3}),
    ])
    def test_every_learner_runs(self, learner, env):
        row = run_experiment(experiment(learner, env=env, horizons=[96])).rows[0]
        assert row.learner == learner
        assert row.expected_regret <= row.T
        if learner == "spm-sleeping":
            assert row.sleeping_regret is not None

    def test_same_seed_byte_identical(self, stochastic_experiment, tmp_path):
        run_experiment(stochastic_experiment, tmp_path / "a")
        run_experiment(stochastic_experiment, tmp_path / "b")
        for name in ("results.csv", "summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_different_seed_differs(self, stochastic_experiment):
        other = stochastic_experiment.model_copy(update={"seed": 8})
        assert run_experiment(stochastic_experiment).rows != run_experiment(other).rows

    def test_worker_processes_match_inline(self, stochastic_experiment):
        inline = run_experiment(stochastic_experiment, threads=1).rows
        pooled = run_experiment(stochastic_experiment, threads=2).rows
        assert pooled == inline

    def test_learners_share_the_loss_matrix(self):
        hybrid = ReplicationRunner(experiment(), 64, 0)
        baseline = ReplicationRunner(experiment("exp3"), 64, 0)
        np.testing.assert_array_equal(hybrid.schedule.losses, baseline.schedule.losses)

    def test_timing_column(self):
        assert run_experiment(experiment()).rows[0].wallclock_ms is None
        assert run_experiment(experiment(timing=True)).rows[0].wallclock_ms >= 0.0

    def test_q_inf_column(self):
        row = run_experiment(experiment(compute_q_inf=True)).rows[0]
        assert row.Q_inf is not None
        assert row.Q_inf <= row.Q_realized + 1e-9


class TestCheckpoints:
    """Resuming a replication from its checkpoint."""

    def test_resume_matches_uninterrupted(self, tmp_path):
        config = experiment("spm-optimistic-reservoir", horizons=[128])
        uninterrupted = ReplicationRunner(config, 128, 0).run().row

        interrupted = ReplicationRunner(config, 128, 0)
        interrupted.advance(70)
        path = write_checkpoint(interrupted.checkpoint(), tmp_path / "checkpoint.json")
        resumed = ReplicationRunner.from_checkpoint(read_checkpoint(path))
        assert resumed.round == 70
        assert resumed.run().row == uninterrupted

    def test_periodic_checkpoint_written(self, tmp_path):
        config = experiment(checkpoint_every=16)
        ReplicationRunner(config, 64, 0, out_dir=tmp_path).run()
        checkpoint = read_checkpoint(checkpoint_path(tmp_path, 64, 0))
        assert checkpoint.learner.round == 48
        assert checkpoint.experiment == config

    def test_missing_checkpoint(self, tmp_path):
        with pytest.raises(ConfigError):
            read_checkpoint(tmp_path / "absent.json")


class TestArtifacts:
    """results.csv, summary.json, round logs and config loading."""

    def test_results_columns(self, stochastic_experiment, tmp_path):
        run_experiment(stochastic_experiment, tmp_path)
        frame = read_results(tmp_path / "results.csv")
        assert list(frame.columns) == RESULT_COLUMNS + EXTRA_RESULT_COLUMNS
        assert list(zip(frame["T"], frame["replication"])) == [(64, 0), (64, 1), (128, 0), (128, 1)]
        assert frame["wallclock_ms"].isna().all()

    def test_summary_round_trip(self, stochastic_experiment, tmp_path):
        result = run_experiment(stochastic_experiment, tmp_path)
        assert read_summary(tmp_path / "summary.json") == result.summary

    def test_round_log_written_with_full_capture(self, tmp_path):
        run_experiment(experiment(capture="full"), tmp_path)
        frame = pd.read_csv(roundlog_path(tmp_path, 64, 0))
        assert len(frame) == 64
        assert {"t", "arm", "loss", "expected_loss", "z", "p_0", "p_3", "q_0", "beta"} <= set(frame.columns)
        np.testing.assert_allclose(frame[[f"p_{i}" for i in range(4)]].sum(axis=1), 1.0, atol=1e-9)

    def test_no_round_log_by_default(self, tmp_path):
        run_experiment(experiment(), tmp_path)
        assert not roundlog_path(tmp_path, 64, 0).exists()

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config_dict(path)

    def test_invalid_config(self):
        with pytest.raises(ConfigError, match="horizons"):
            validate_config({"env": {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.2}, "horizons": []})

    def test_learner_defaults(self):
        assert validate_config(
            {"env": {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.2}, "horizons": [64]}
        ).learner == LearnerSettings()
