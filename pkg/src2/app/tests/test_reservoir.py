"""
Unit tests for the per-arm reservoirs.

These tests verify that:
1. Capacity, fill window and reservoir-round schedule follow ln T
2. Fill appends, replace overwrites index floor(u |S|)
3. Replace on an empty reservoir raises ReplaceOnEmpty
4. The in-memory store snapshots and restores its contents

RUN: pytest src2/app/tests/test_reservoir.py -v
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exceptions import ReplaceOnEmpty
from app.memory import (
    InMemoryReservoirStore,
    Reservoir,
    ReservoirPhase,
    fill_window,
    reservoir_capacity,
    reservoir_insert,
    schedule_reservoir_round,
)


class TestSchedule:
    """Capacity and reservoir-round probability."""

    @pytest.mark.parametrize("horizon, capacity", [(1, 1), (2, 1), (3, 2), (64, 5), (2 ** 15, 11)])
    def test_capacity_is_ceil_log(self, horizon, capacity):
        assert reservoir_capacity(horizon) == capacity

    def test_fill_window(self):
        assert fill_window(8, 2 ** 15) == 8 * math.ceil(math.log(2 ** 15))

    def test_early_rounds_always_reservoir(self):
        assert schedule_reservoir_round(1, 4, 64, 0.999999)

    def test_probability_threshold(self):
        threshold = 4 * math.log(1000) / 500
        assert schedule_reservoir_round(500, 4, 1000, threshold - 1e-9)
        assert not schedule_reservoir_round(500, 4, 1000, threshold + 1e-9)

    def test_round_outside_horizon(self):
        with pytest.raises(ValueError):
            schedule_reservoir_round(65, 4, 64, 0.5)


class TestReservoirInsert:
    """Fill and replace phases."""

    def test_fill_appends(self):
        reservoir = reservoir_insert(Reservoir(capacity=3), 0.2, ReservoirPhase.FILL)
        reservoir = reservoir_insert(reservoir, 0.4, ReservoirPhase.FILL)
        assert reservoir.samples == [0.2, 0.4]
        assert reservoir.mean == pytest.approx(0.3)

    def test_fill_on_full_rejected(self):
        with pytest.raises(ValueError):
            reservoir_insert(Reservoir(capacity=1, samples=[0.5]), 0.1, ReservoirPhase.FILL)

    @pytest.mark.parametrize("u, index", [(0.0, 0), (0.34, 1), (0.99, 2)])
    def test_replace_index(self, u, index):
        reservoir = reservoir_insert(Reservoir(capacity=3, samples=[0.1, 0.2, 0.3]), 0.9, ReservoirPhase.REPLACE, u)
        assert reservoir.samples[index] == 0.9
        assert len(reservoir.samples) == 3

    def test_replace_on_empty(self):
        with pytest.raises(ReplaceOnEmpty):
            reservoir_insert(Reservoir(capacity=2), 0.5, ReservoirPhase.REPLACE, 0.5)

    def test_insert_leaves_original_untouched(self):
        original = Reservoir(capacity=2, samples=[0.5])
        reservoir_insert(original, 0.1, ReservoirPhase.REPLACE, 0.0)
        assert original.samples == [0.5]

    @settings(max_examples=100, deadline=None)
    @given(
        losses=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=40),
        draws=st.lists(st.floats(0.0, 1.0, exclude_max=True), min_size=40, max_size=40),
    )
    def test_size_bounded_and_mean_in_range(self, losses, draws):
        reservoir = Reservoir(capacity=5)
        for loss, u in zip(losses, draws):
            phase = ReservoirPhase.REPLACE if reservoir.is_full else ReservoirPhase.FILL
            reservoir = reservoir_insert(reservoir, loss, phase, u)
        assert len(reservoir.samples) == min(5, len(losses))
        assert min(reservoir.samples) - 1e-12 <= reservoir.mean <= max(reservoir.samples) + 1e-12

    def test_empty_mean_is_zero(self):
        assert Reservoir(capacity=1).mean == 0.0

    def test_samples_outside_unit_interval_rejected(self):
        with pytest.raises(ValueError):
            Reservoir(capacity=2, samples=[1.5])


class TestInMemoryReservoirStore:
    """Provider behind IReservoirStore."""

    def test_fill_on_full_turns_into_replace(self):
        store = InMemoryReservoirStore(num_arms=2, capacity=1)
        store.insert(0, 0.2, ReservoirPhase.FILL)
        store.insert(0, 0.8, ReservoirPhase.FILL, u=0.0)
        assert store.reservoir(0).samples == [0.8]

    def test_means_per_arm(self):
        store = InMemoryReservoirStore(num_arms=3, capacity=2)
        store.insert(0, 0.2, ReservoirPhase.FILL)
        store.insert(0, 0.6, ReservoirPhase.FILL)
        store.insert(2, 1.0, ReservoirPhase.FILL)
        np.testing.assert_allclose(store.means(), [0.4, 0.0, 1.0])
        assert store.sizes() == [2, 0, 1]

    def test_snapshot_restore(self):
        store = InMemoryReservoirStore(num_arms=2, capacity=3)
        store.insert(1, 0.7, ReservoirPhase.FILL)
        copy = InMemoryReservoirStore(num_arms=2, capacity=3)
        copy.restore(store.snapshot())
        assert copy.snapshot() == [[], [0.7]]

    def test_restore_wrong_arm_count(self):
        with pytest.raises(ValueError):
            InMemoryReservoirStore(num_arms=2, capacity=3).restore([[0.1]])
