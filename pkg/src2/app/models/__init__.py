"""Models package - value types shared across solvers, learners, environments and the harness."""
from .checkpoint import LearnerCheckpoint, RunCheckpoint
from .environment import (
    EnvMetrics,
    EnvSpec,
    LowerBoundAdversarialSpec,
    LowerBoundParams,
    LowerBoundStochasticSpec,
    ScriptedSpec,
    SelfBoundingSpec,
    SleepingSpec,
    SoftSparseSpec,
    SoftSparsityReport,
    SparseAdversarialSpec,
    StochasticGapsSpec,
    VariationBoundedSpec,
)
from .experiment import ExperimentConfig, HorizonSummary, LearnerSettings, RegretSummary, ResultRow
from .reports import LemmaReport
from .rounds import RoundLog, RoundOutcome
from .spm import SpmConfig
from .vectors import LossRange, ProbVector

__all__ = [
    "EnvMetrics",
    "EnvSpec",
    "ExperimentConfig",
    "HorizonSummary",
    "LearnerCheckpoint",
    "LearnerSettings",
    "LemmaReport",
    "LossRange",
    "LowerBoundAdversarialSpec",
    "LowerBoundParams",
    "LowerBoundStochasticSpec",
    "ProbVector",
    "RegretSummary",
    "ResultRow",
    "RoundLog",
    "RoundOutcome",
    "RunCheckpoint",
    "ScriptedSpec",
    "SelfBoundingSpec",
    "SleepingSpec",
    "SoftSparseSpec",
    "SoftSparsityReport",
    "SparseAdversarialSpec",
    "SpmConfig",
    "StochasticGapsSpec",
    "VariationBoundedSpec",
]
