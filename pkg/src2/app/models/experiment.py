"""
Experiment Models - what `main.py run` is asked to do and what it reports.

ExperimentConfig is loaded from a JSON file and overlaid with CLI flags.
ResultRow is one (horizon, replication) line of results.csv; RegretSummary
is summary.json.
"""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .environment import EnvSpec
from .spm import ConstantProfile


class LearnerSettings(BaseModel):
    """
    Learner id plus the constants used to build its SpmConfig per horizon.

    alpha=None picks 1 - 1/(2 ln K), or the sparsity-tuned exponent when
    `sparsity` is set.
    """
    model_config = ConfigDict(extra="forbid")

    id: str = Field(default="spm-hybrid")
    alpha: float | None = Field(default=None, gt=0.0, lt=1.0)
    sparsity: int | None = Field(default=None, ge=1)
    d: float = Field(default=2.0, gt=1.0)
    profile: ConstantProfile = "standard"
    beta1: float | None = Field(default=None, gt=0.0)
    gamma: float | None = Field(default=None, gt=0.0)


class ExperimentConfig(BaseModel):
    """One learner against one environment over a horizon grid."""

    model_config = ConfigDict(extra="forbid")

    learner: LearnerSettings = Field(default_factory=LearnerSettings)
    env: EnvSpec
    horizons: list[int] = Field(min_length=1)
    replications: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)
    capture: Literal["summary", "full"] = "summary"
    checkpoint_every: int | None = Field(default=None, ge=1)
    timing: bool = False
    compute_q_inf: bool = False

    @field_validator("horizons")
    @classmethod
    def _positive_sorted(cls, horizons: list[int]) -> list[int]:
        if any(h < 1 for h in horizons):
            raise ValueError("horizons must be positive")
        return sorted(set(horizons))

    @property
    def num_arms(self) -> int:
        return self.env.num_arms


class ResultRow(BaseModel):
    """One replication at one horizon."""

    T: int
    replication: int
    learner: str
    env: str
    realized_regret: float
    expected_regret: float
    best_arm: int
    S_realized: int
    Q_realized: float
    Lstar: float
    wallclock_ms: float | None = None
    pseudo_regret: float | None = None
    sleeping_regret: float | None = None
    Q_inf: float | None = None


# documented results.csv columns, in order; extras follow
RESULT_COLUMNS = [
    "T",
    "replication",
    "learner",
    "env",
    "realized_regret",
    "expected_regret",
    "best_arm",
    "S_realized",
    "Q_realized",
    "Lstar",
    "wallclock_ms",
]
EXTRA_RESULT_COLUMNS = ["pseudo_regret", "sleeping_regret", "Q_inf"]


class HorizonSummary(BaseModel):
    """Aggregates over the replications at one horizon."""

    T: int
    replications: int
    realized_mean: float
    realized_se: float | None = Field(default=None, description="None with a single replication")
    expected_mean: float
    expected_se: float | None = None
    pseudo_mean: float | None = None
    sleeping_mean: float | None = None
    best_arm: int
    S_mean: float
    Q_mean: float
    Lstar_mean: float
    ratios: dict[str, float | None] = Field(default_factory=dict)


class RegretSummary(BaseModel):
    """summary.json: the config echo and one aggregate per horizon."""

    config: ExperimentConfig
    horizons: list[HorizonSummary]

    def at(self, horizon: int) -> HorizonSummary:
        for summary in self.horizons:
            if summary.T == horizon:
                return summary
        raise KeyError(f"no summary for T={horizon}")
