"""
Scaling and adaptivity checks on full-size experiments.

These runs take minutes and are excluded from the default selection.

RUN: pytest src2/app/tests/test_acceptance.py -v -m slow
"""
import math
import os

import numpy as np
import pytest

from app.harness import ReplicationRunner, run_experiment, run_verification
from app.models import ExperimentConfig


pytestmark = pytest.mark.slow

WORKERS = os.cpu_count() or 1


def mean_expected_regret(config: ExperimentConfig) -> dict[int, float]:
    summary = run_experiment(config, threads=WORKERS).summary
    return {h.T: h.expected_mean for h in summary.horizons}


def test_verification_passes():
    failed = [r.lemma_id for r in run_verification(seed=0) if not r.passed]
    assert failed == []


def test_stochastic_regret_grows_logarithmically():
    horizons = [2 ** n for n in range(12, 17)]
    config = ExperimentConfig.model_validate({
        "learner": {"id": "spm-hybrid"},
        "env": {"kind": "stochastic_gaps", "num_arms": 8, "delta_min": 0.25},
        "horizons": horizons,
        "replications": 20,
        "seed": 2024,
    })
    regret = mean_expected_regret(config)
    means = np.array([regret[h] for h in horizons])
    slopes = np.diff(means) / np.diff(horizons)
    assert np.all(np.diff(slopes) <= 0.0)
    ratios = means / np.log(horizons)
    assert ratios.max() / ratios.min() < 3.0


def test_sparse_losses_lower_regret():
    def regret_at(sparsity: int) -> float:
        config = ExperimentConfig.model_validate({
            "learner": {"id": "spm-hybrid"},
            "env": {"kind": "sparse_adversarial", "num_arms": 32, "sparsity": sparsity},
            "horizons": [2 ** 15],
            "replications": 20,
            "seed": 11,
        })
        return mean_expected_regret(config)[2 ** 15]

    assert regret_at(2) <= 0.5 * regret_at(32)


def test_regret_follows_variation():
    horizon = 2 ** 15
    points = []
    for q_target in (1e2, 1e3, 1e4):
        config = ExperimentConfig.model_validate({
            "learner": {"id": "spm-optimistic-reservoir"},
            "env": {"kind": "variation_bounded", "num_arms": 8, "q_target": q_target},
            "horizons": [horizon],
            "replications": 5,
            "seed": 5,
        })
        result = run_experiment(config, threads=WORKERS)
        points.append((np.mean([row.Q_realized for row in result.rows]), result.summary.at(horizon).expected_mean))
    points.sort()
    regrets = [regret for _, regret in points]
    assert regrets == sorted(regrets)


def test_sleeping_regret_per_round_shrinks():
    horizons = [2 ** 12, 2 ** 13, 2 ** 14]
    rounds = np.arange(horizons[-1])[:, None]
    arms = np.arange(8)[None, :]
    mask = ((rounds + arms) % 3 != 0) | (arms == (rounds % 8))
    config = ExperimentConfig.model_validate({
        "learner": {"id": "spm-sleeping"},
        "env": {"kind": "sleeping", "num_arms": 8, "availability": "scripted", "mask": mask.astype(int).tolist()},
        "horizons": horizons,
        "replications": 4,
        "seed": 17,
    })
    per_round = []
    for horizon in horizons:
        regrets = [ReplicationRunner(config, horizon, r).run().regret.sleeping_per_action for r in range(4)]
        per_round.append(np.maximum(np.mean(regrets, axis=0), 0.0) / horizon)
    per_round = np.array(per_round)
    assert np.all(np.diff(per_round, axis=0) <= 1e-12)
    assert np.all(np.diff(per_round.max(axis=1)) < 0.0)


def test_expected_regret_has_lower_variance():
    config = ExperimentConfig.model_validate({
        "learner": {"id": "spm-hybrid"},
        "env": {"kind": "stochastic_gaps", "num_arms": 4, "delta_min": 0.25},
        "horizons": [512],
        "replications": 100,
        "seed": 3,
    })
    rows = run_experiment(config, threads=WORKERS).rows
    realized = np.var([row.realized_regret for row in rows], ddof=1)
    expected = np.var([row.expected_regret for row in rows], ddof=1)
    assert expected < realized
    assert math.isfinite(expected)
