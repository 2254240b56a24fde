"""Learners package - SPM learners, the EXP3 baseline and their registry."""
from .base import BaseLearner, ILearner
from .coordinate_wise_spm import CoordinateWiseSpmLearner
from .exp3 import Exp3Learner
from .hybrid_spm import HybridSpmLearner
from .learner_registry import LearnerInfo, LearnerRegistry, default_registry
from .optimistic_reservoir_spm import OptimisticReservoirSpmLearner
from .sleeping_spm import SleepingSpmLearner
from .spm_rules import choose_alpha, mix_exploration, sample_arm

__all__ = [
    "BaseLearner",
    "ILearner",
    "CoordinateWiseSpmLearner",
    "Exp3Learner",
    "HybridSpmLearner",
    "LearnerInfo",
    "LearnerRegistry",
    "OptimisticReservoirSpmLearner",
    "SleepingSpmLearner",
    "choose_alpha",
    "default_registry",
    "mix_exploration",
    "sample_arm",
]
