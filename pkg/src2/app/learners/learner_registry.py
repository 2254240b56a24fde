"""
Learner Registry - discovery pattern for experiment wiring.

Each learner registers with:
  - name: unique identifier (e.g., "spm-hybrid", "exp3")
  - description: what the learner is for (shown by `main.py run --help`)
  - learner_class: the class to instantiate

The harness validates a configured learner id with has_learner(), then
get() builds a fresh instance per replication.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..models.spm import SpmConfig
from ..models.vectors import LossRange
from .base import BaseLearner
from .coordinate_wise_spm import CoordinateWiseSpmLearner
from .exp3 import Exp3Learner
from .hybrid_spm import HybridSpmLearner
from .optimistic_reservoir_spm import OptimisticReservoirSpmLearner
from .sleeping_spm import SleepingSpmLearner


logger = logging.getLogger(__name__)


@dataclass
class LearnerInfo:
    """Metadata about a registered learner."""
    name: str
    description: str
    learner_class: type[BaseLearner]

    @property
    def loss_range(self) -> LossRange:
        return self.learner_class.loss_range


class LearnerRegistry:
    """
    Registry for learner discovery.

    Usage:
        registry = LearnerRegistry()
        registry.register("spm-hybrid", "Real-time SPM...", HybridSpmLearner)

        learner = registry.get("spm-hybrid", config=cfg, rng=stream)
    """

    def __init__(self):
        self._learners: dict[str, LearnerInfo] = {}

    def register(self, name: str, description: str, learner_class: type[BaseLearner]) -> None:
        if name in self._learners:
            raise ValueError(f"Learner '{name}' is already registered")
        self._learners[name] = LearnerInfo(name=name, description=description, learner_class=learner_class)
        logger.debug("[LearnerRegistry] Registered learner: %s", name)

    def info(self, name: str) -> LearnerInfo:
        if name not in self._learners:
            available = list(self._learners.keys())
            raise KeyError(f"Learner '{name}' not found. Available: {available}")
        return self._learners[name]

    def get(self, name: str, config: SpmConfig, rng: np.random.Generator | None = None) -> BaseLearner:
        """Fresh learner instance for one replication."""
        return self.info(name).learner_class(config, rng)

    def get_descriptions(self) -> str:
        """One "- name: description" line per learner."""
        return "\n".join(f"- {name}: {info.description}" for name, info in self._learners.items())

    def list_learners(self) -> list[str]:
        return list(self._learners.keys())

    def has_learner(self, name: str) -> bool:
        return name in self._learners


def default_registry() -> LearnerRegistry:
    """Registry with every built-in learner."""
    registry = LearnerRegistry()
    for learner_class in (
        HybridSpmLearner,
        CoordinateWiseSpmLearner,
        SleepingSpmLearner,
        OptimisticReservoirSpmLearner,
        Exp3Learner,
    ):
        registry.register(learner_class.learner_id, learner_class.description, learner_class)
    return registry
