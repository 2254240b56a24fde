"""
Environment factory - EnvSpec kind to environment class.

Adding a regime:
    1. Add its spec to models/environment.py and to the EnvSpec union
    2. Implement a LossEnvironment subclass
    3. Register the pair in ENVIRONMENTS
"""
import numpy as np

from ..models.environment import EnvSpec
from .adversarial import (
    ScriptedEnvironment,
    SoftSparseEnvironment,
    SparseAdversarialEnvironment,
    VariationBoundedEnvironment,
)
from .base import LossEnvironment
from .lower_bounds import LowerBoundAdversarialEnvironment, LowerBoundStochasticEnvironment
from .sleeping import SleepingEnvironment
from .stochastic import SelfBoundingEnvironment, StochasticGapsEnvironment


ENVIRONMENTS: dict[str, type[LossEnvironment]] = {
    "stochastic_gaps": StochasticGapsEnvironment,
    "self_bounding": SelfBoundingEnvironment,
    "scripted": ScriptedEnvironment,
    "sparse_adversarial": SparseAdversarialEnvironment,
    "soft_sparse": SoftSparseEnvironment,
    "variation_bounded": VariationBoundedEnvironment,
    "sleeping": SleepingEnvironment,
    "lower_bound_stochastic": LowerBoundStochasticEnvironment,
    "lower_bound_adversarial": LowerBoundAdversarialEnvironment,
}


def build_environment(spec: EnvSpec, horizon: int) -> LossEnvironment:
    return ENVIRONMENTS[spec.kind](spec, horizon)


def env_emit_round(
    environment: LossEnvironment, t: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray | None]:
    """Loss vector and active set of round t."""
    return environment.emit_round(t, rng)
