"""
Unit tests for the loss environments.

These tests verify that:
1. Every regime emits losses in its declared range with the right structure
2. Materializing twice from the same stream gives the same matrix
3. Specs reject inconsistent parameters; environments reject invalid regimes
4. The adversarial lower-bound parameters satisfy their defining equations
5. Scripted matrices and masks load from headerless CSV files

RUN: pytest src2/app/tests/test_environments.py -v
"""
import math

import numpy as np
import pytest
from pydantic import TypeAdapter, ValidationError

from app.environments import build_environment, env_emit_round, lower_bound_adv_params
from app.environments.loaders import load_loss_matrix, load_mask, save_matrix
from app.exceptions import ConfigError, InvalidRegime
from app.models import (
    EnvSpec,
    LossRange,
    LowerBoundAdversarialSpec,
    LowerBoundStochasticSpec,
    ScriptedSpec,
    SelfBoundingSpec,
    SleepingSpec,
    SoftSparseSpec,
    SparseAdversarialSpec,
    StochasticGapsSpec,
    VariationBoundedSpec,
)
from app.utils.rng import StreamPurpose, make_stream


def materialize(spec, horizon: int, seed: int = 11):
    return build_environment(spec, horizon).materialize(make_stream(seed, horizon, 0, StreamPurpose.ENVIRONMENT))


class TestEnvSpecs:
    """Spec validation and discriminated parsing."""

    def test_kind_selects_spec(self):
        spec = TypeAdapter(EnvSpec).validate_python({"kind": "soft_sparse", "num_arms": 8, "alpha": 0.5, "U": 1.0})
        assert isinstance(spec, SoftSparseSpec)
        assert spec.loss_range is LossRange.SIGNED

    def test_delta_min_expands_to_gaps(self):
        spec = StochasticGapsSpec(num_arms=3, delta_min=0.1)
        assert spec.gaps == [0.0, 0.1, 0.1]
        assert spec.means == pytest.approx([0.5, 0.6, 0.6])

    def test_gaps_or_delta_required(self):
        with pytest.raises(ValidationError):
            StochasticGapsSpec(num_arms=3)

    def test_means_must_stay_in_unit_interval(self):
        with pytest.raises(ValidationError):
            StochasticGapsSpec(num_arms=2, gaps=[0.0, 0.6])

    def test_fixed_range_enforced(self):
        with pytest.raises(ValidationError):
            StochasticGapsSpec(num_arms=2, delta_min=0.1, loss_range="signed")

    def test_sparsity_at_most_k(self):
        with pytest.raises(ValidationError):
            SparseAdversarialSpec(num_arms=4, sparsity=5)

    def test_scripted_needs_one_source(self):
        with pytest.raises(ValidationError):
            ScriptedSpec(num_arms=2)
        with pytest.raises(ValidationError):
            ScriptedSpec(num_arms=2, losses=[[0.0, 1.0]], losses_path="losses.csv")

    def test_extra_fields_rejected(self):
        with pytest.raises(ValidationError):
            TypeAdapter(EnvSpec).validate_python({"kind": "stochastic_gaps", "num_arms": 2, "delta_min": 0.1, "T": 10})


class TestStochasticEnvironments:
    """Stochastic gaps and the self-bounding corruption."""

    def test_bernoulli_losses_and_means(self):
        schedule = materialize(StochasticGapsSpec(num_arms=3, gaps=[0.0, 0.2, 0.3], base_mean=0.2), 4000)
        assert set(np.unique(schedule.losses)) <= {0.0, 1.0}
        np.testing.assert_allclose(schedule.losses.mean(axis=0), [0.2, 0.4, 0.5], atol=0.05)
        np.testing.assert_allclose(schedule.means, [0.2, 0.4, 0.5])
        assert schedule.active is None

    def test_uniform_losses(self):
        schedule = materialize(StochasticGapsSpec(num_arms=2, delta_min=0.3, distribution="uniform"), 4000)
        assert schedule.losses.min() >= 0.0 and schedule.losses.max() <= 1.0
        np.testing.assert_allclose(schedule.losses.mean(axis=0), [0.5, 0.8], atol=0.03)

    def test_same_stream_same_matrix(self):
        spec = StochasticGapsSpec(num_arms=4, delta_min=0.2)
        np.testing.assert_array_equal(materialize(spec, 300).losses, materialize(spec, 300).losses)
        assert not np.array_equal(materialize(spec, 300).losses, materialize(spec, 300, seed=12).losses)

    def test_corrupted_prefix(self):
        schedule = materialize(SelfBoundingSpec(num_arms=4, delta_min=0.2, corruption=3.5), 50)
        np.testing.assert_array_equal(schedule.losses[:3], np.tile([1.0, 0.0, 0.0, 0.0], (3, 1)))

    def test_corruption_keeps_stream_aligned(self):
        plain = materialize(StochasticGapsSpec(num_arms=4, delta_min=0.2), 50)
        corrupted = materialize(SelfBoundingSpec(num_arms=4, delta_min=0.2, corruption=3.0), 50)
        np.testing.assert_array_equal(plain.losses[3:], corrupted.losses[3:])

    def test_round_outside_horizon(self):
        environment = build_environment(StochasticGapsSpec(num_arms=2, delta_min=0.1), 10)
        with pytest.raises(ValueError):
            env_emit_round(environment, 11, np.random.default_rng(0))


class TestAdversarialEnvironments:
    """Scripted, hard-sparse, soft-sparse and variation-bounded regimes."""

    def test_scripted_replays_prefix(self):
        rows = [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]]
        schedule = materialize(ScriptedSpec(num_arms=2, losses=rows), 2)
        np.testing.assert_array_equal(schedule.losses, rows[:2])

    def test_scripted_too_short(self):
        with pytest.raises(InvalidRegime):
            build_environment(ScriptedSpec(num_arms=2, losses=[[0.0, 1.0]]), 5)

    def test_scripted_out_of_range(self):
        with pytest.raises(InvalidRegime):
            materialize(ScriptedSpec(num_arms=2, losses=[[-0.5, 1.0]]), 1)

    @pytest.mark.parametrize("loss_range, hit", [("signed", -1.0), ("unit", 1.0)])
    def test_sparse_support(self, loss_range, hit):
        schedule = materialize(SparseAdversarialSpec(num_arms=8, sparsity=3, loss_range=loss_range), 2000)
        assert np.count_nonzero(schedule.losses, axis=1).max() <= 3
        assert set(np.unique(schedule.losses)) <= {0.0, hit}

    def test_sparse_best_arm_wins(self):
        schedule = materialize(SparseAdversarialSpec(num_arms=8, sparsity=2, delta=0.2), 4000)
        assert int(np.argmin(schedule.losses.sum(axis=0))) == 0
        np.testing.assert_allclose(schedule.losses.mean(axis=0), schedule.means, atol=0.05)

    def test_soft_sparse_rows(self):
        spec = SoftSparseSpec(num_arms=16, alpha=0.5, U=1.5, gap=0.1)
        schedule = materialize(spec, 3000)
        nonzero = np.count_nonzero(schedule.losses, axis=1)
        assert set(np.unique(nonzero)) <= {0, 1, 16}
        single = schedule.losses[nonzero == 1]
        assert np.all(single[:, 0] == -1.0)
        assert spec.dense_probability == pytest.approx((1.5 - 0.1) / 4.0)

    def test_variation_calibrated(self):
        environment = build_environment(VariationBoundedSpec(num_arms=4, q_target=20.0), 500)
        schedule = environment.materialize(make_stream(3, 500, 0, StreamPurpose.ENVIRONMENT))
        centered = schedule.losses - schedule.losses.mean(axis=0)
        assert abs(np.sum(centered ** 2) - 20.0) <= 0.05 * 20.0
        assert environment.rho is not None and environment.rho > 0.0

    def test_variation_needs_calibration(self):
        environment = build_environment(VariationBoundedSpec(num_arms=2, q_target=1.0), 10)
        with pytest.raises(RuntimeError):
            environment.emit_round(1, np.random.default_rng(0))

    def test_variation_target_unreachable(self):
        with pytest.raises(InvalidRegime):
            materialize(VariationBoundedSpec(num_arms=2, q_target=1000.0), 10)


class TestSleepingEnvironment:
    """Random and scripted availability."""

    def test_random_sets_nonempty(self):
        schedule = materialize(SleepingSpec(num_arms=5, active_prob=0.2), 500)
        assert schedule.active.shape == (500, 5)
        assert schedule.active.any(axis=1).all()
        assert 0.1 < schedule.active.mean() < 0.4

    def test_scripted_mask(self):
        mask = [[1, 0, 0], [0, 1, 1]]
        schedule = materialize(SleepingSpec(num_arms=3, availability="scripted", mask=mask), 2)
        np.testing.assert_array_equal(schedule.active, np.array(mask, dtype=bool))

    def test_scripted_mask_with_empty_round(self):
        with pytest.raises(InvalidRegime):
            build_environment(SleepingSpec(num_arms=2, availability="scripted", mask=[[1, 0], [0, 0]]), 2)

    def test_scripted_mask_too_short(self):
        with pytest.raises(InvalidRegime):
            build_environment(SleepingSpec(num_arms=2, availability="scripted", mask=[[1, 0]]), 3)

    def test_scripted_losses(self):
        losses = [[0.1, 0.9], [0.2, 0.8]]
        schedule = materialize(SleepingSpec(num_arms=2, losses=losses), 2)
        np.testing.assert_array_equal(schedule.losses, losses)
        assert schedule.means is None


class TestLowerBoundInstances:
    """Regime checks and the (eta, epsilon) system."""

    def test_stochastic_gap(self):
        spec = LowerBoundStochasticSpec(num_arms=16, alpha=0.75, U=1.0)
        assert spec.delta_min == pytest.approx(1.0 / 9.0)
        schedule = materialize(spec, 5000)
        assert set(np.unique(schedule.losses)) <= {-1.0, 0.0}
        assert int(np.argmin(schedule.means)) == 0

    @pytest.mark.parametrize("num_arms, U", [(3, 1.0), (16, 0.5), (16, 2.5)])
    def test_invalid_regime(self, num_arms, U):
        with pytest.raises(InvalidRegime):
            build_environment(LowerBoundStochasticSpec(num_arms=num_arms, alpha=0.75, U=U), 1000)

    @pytest.mark.parametrize("num_arms, horizon, alpha, U", [
        (64, 2 ** 15, 0.75, 2.0),
        (256, 2 ** 18, 0.6, 1.0),
        (4096, 2 ** 18, 0.9, 100.0),
    ])
    def test_adversarial_params_solve_system(self, num_arms, horizon, alpha, U):
        params = lower_bound_adv_params(num_arms, horizon, alpha, U)
        assert abs(params.soft_sparsity_residual) <= 1e-9
        assert abs(params.information_residual) <= 1e-9
        assert params.half_u_slack >= 0.0
        assert params.eta * num_arms ** alpha + params.epsilon == pytest.approx(U)
        assert params.epsilon == pytest.approx(math.sqrt(params.eta * num_arms / (8 * horizon)))

    def test_adversarial_horizon_too_short(self):
        with pytest.raises(InvalidRegime):
            lower_bound_adv_params(16, 63, 0.75, 1.0)

    def test_adversarial_environment_uses_params(self):
        spec = LowerBoundAdversarialSpec(num_arms=16, alpha=0.75, U=1.5, target_arm=2)
        environment = build_environment(spec, 1024)
        assert environment.params == lower_bound_adv_params(16, 1024, 0.75, 1.5)
        assert int(np.argmin(environment.mean_losses)) == 2


class TestLoaders:
    """Headerless CSV matrices and masks."""

    def test_matrix_written_and_read(self, tmp_path):
        path = tmp_path / "losses.csv"
        matrix = np.array([[0.1, 0.2], [1.0 / 3.0, 0.0]])
        save_matrix(path, matrix)
        np.testing.assert_array_equal(load_loss_matrix(path, 2), matrix)

    def test_scripted_spec_reads_path(self, tmp_path):
        path = tmp_path / "losses.csv"
        save_matrix(path, np.eye(3))
        schedule = materialize(ScriptedSpec(num_arms=3, losses_path=str(path)), 3)
        np.testing.assert_array_equal(schedule.losses, np.eye(3))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_loss_matrix(tmp_path / "absent.csv")

    def test_column_mismatch(self, tmp_path):
        path = tmp_path / "losses.csv"
        save_matrix(path, np.zeros((2, 3)))
        with pytest.raises(ConfigError):
            load_loss_matrix(path, 2)

    def test_mask_must_be_binary(self, tmp_path):
        path = tmp_path / "mask.csv"
        path.write_text("1,0\n0.5,1\n")
        with pytest.raises(ConfigError):
            load_mask(path)

    def test_mask_read(self, tmp_path):
        path = tmp_path / "mask.csv"
        save_matrix(path, np.array([[True, False], [True, True]]))
        assert load_mask(path, 2).tolist() == [[True, False], [True, True]]
