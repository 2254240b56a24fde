"""
Shared fixtures for the simulator tests.

RUN: pytest src2/app/tests -v
"""
import numpy as np
import pytest

from app.learners.spm_rules import choose_alpha
from app.models.experiment import ExperimentConfig, LearnerSettings
from app.models.spm import SpmConfig


def play(learner, losses: np.ndarray, rng: np.random.Generator, active: np.ndarray | None = None, start: int = 1):
    """Drive a learner over a loss matrix; returns the round logs."""
    from app.learners.spm_rules import sample_arm

    logs = []
    for t in range(start, losses.shape[0] + 1):
        mask = None if active is None else active[t - 1]
        p = learner.begin_round(t, mask)
        arm = sample_arm(p, float(rng.random()))
        logs.append(learner.observe(arm, float(losses[t - 1, arm])))
    return logs


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def spm_config():
    """K = 4, T = 200 with the standard constants."""
    return SpmConfig.defaults(num_arms=4, horizon=200, alpha=choose_alpha(4))


@pytest.fixture
def stochastic_experiment():
    return ExperimentConfig(
        learner=LearnerSettings(id="spm-hybrid"),
        env={"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.2},
        horizons=[64, 128],
        replications=2,
        seed=7,
    )
