"""
Unit tests for the data-dependent metrics of a loss matrix.

RUN: pytest src2/app/tests/test_metrics.py -v
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from app.environments import (
    build_environment,
    compute_env_metrics,
    max_norm_variation,
    soft_sparsity_statistic,
    total_variation,
    verify_soft_sparsity,
)
from app.models import SoftSparseSpec
from app.utils.rng import StreamPurpose, make_stream


ALTERNATING = np.array([[0.0, 1.0], [1.0, 0.0]])


class TestVariation:
    """Q and its max-norm counterpart."""

    def test_total_variation_by_hand(self):
        assert total_variation(ALTERNATING) == pytest.approx(1.0)

    def test_constant_sequence_has_no_variation(self):
        losses = np.tile([0.3, 0.7, 0.1], (20, 1))
        assert total_variation(losses) == pytest.approx(0.0, abs=1e-24)
        assert max_norm_variation(losses) == pytest.approx(0.0, abs=1e-24)

    def test_max_norm_by_hand(self):
        assert max_norm_variation(ALTERNATING) == pytest.approx(0.5)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(1, 30), st.integers(1, 4)), elements=st.floats(0.0, 1.0)))
    def test_max_norm_never_exceeds_total(self, losses):
        assert max_norm_variation(losses) <= total_variation(losses) + 1e-9


class TestSoftSparsity:
    """Per-round statistic and its Monte-Carlo check."""

    def test_statistic_by_hand(self):
        rows = np.array([[-1.0, -1.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]])
        np.testing.assert_allclose(soft_sparsity_statistic(rows, 0.5), [np.sqrt(2.0), 1.0, 0.0])

    def test_soft_sparse_environment_meets_level(self):
        spec = SoftSparseSpec(num_arms=16, alpha=0.5, U=2.0, gap=0.1)
        schedule = build_environment(spec, 40_000).materialize(make_stream(5, 40_000, 0, StreamPurpose.ORACLE))
        report = verify_soft_sparsity(schedule.losses, spec.alpha, spec.U)
        assert not report.violated
        assert abs(report.mean - spec.U) <= 4.0 * report.standard_error

    def test_dense_losses_violate_small_level(self):
        report = verify_soft_sparsity(-np.ones((10_000, 16)), 0.5, 1.0)
        assert report.mean == pytest.approx(4.0)
        assert report.violated

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            verify_soft_sparsity(np.zeros((100, 4)), 0.5, 1.0)


class TestComputeEnvMetrics:
    """compute_env_metrics on small hand-checked matrices."""

    def test_metrics_by_hand(self):
        losses = np.array([[0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        metrics = compute_env_metrics(losses, means=np.array([0.2, 0.5, 0.3]), pulls=np.array([1, 1, 1]))
        assert metrics.s_max == 2
        assert metrics.l_star == 1.0
        assert metrics.best_arm == 0
        assert metrics.delta_min == pytest.approx(0.1)
        assert metrics.q_inf is None
        assert metrics.soft_sparsity is None
        assert metrics.per_arm_pulls == [1, 1, 1]

    def test_ties_pick_smallest_index(self):
        assert compute_env_metrics(np.zeros((3, 4))).best_arm == 0

    def test_equal_means_give_zero_gap(self):
        assert compute_env_metrics(np.zeros((2, 2)), means=np.array([0.5, 0.5])).delta_min == 0.0

    def test_optional_fields(self):
        metrics = compute_env_metrics(ALTERNATING, alpha=0.5, compute_q_inf=True)
        assert metrics.q_inf == pytest.approx(0.5)
        assert metrics.soft_sparsity == pytest.approx(1.0)
        assert metrics.q_inf_is_upper_estimate
