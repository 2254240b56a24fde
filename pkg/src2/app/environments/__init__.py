"""Environments package - oblivious loss generators, metrics and lower-bound instances."""
from .base import LossEnvironment, LossSchedule
from .factory import ENVIRONMENTS, build_environment, env_emit_round
from .lower_bounds import lower_bound_adv_params
from .metrics import (
    compute_env_metrics,
    max_norm_variation,
    soft_sparsity_statistic,
    total_variation,
    verify_soft_sparsity,
)

__all__ = [
    "ENVIRONMENTS",
    "LossEnvironment",
    "LossSchedule",
    "build_environment",
    "compute_env_metrics",
    "env_emit_round",
    "lower_bound_adv_params",
    "max_norm_variation",
    "soft_sparsity_statistic",
    "total_variation",
    "verify_soft_sparsity",
]
