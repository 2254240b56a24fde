"""
Checkpoint documents - versioned JSON snapshots for resume.

A learner checkpoint holds everything its next round depends on; a run
checkpoint adds the harness side of one replication (sampling stream and
regret accumulators). Field reference: docs/checkpoint-format.md.

Vectors are stored as JSON arrays of doubles. Python's float repr
round-trips exactly, so a resumed run is bit-identical to the
uninterrupted one.
"""
from typing import Any, Literal

from pydantic import BaseModel, Field

from .experiment import ExperimentConfig
from .spm import SpmConfig


class LearnerCheckpoint(BaseModel):
    """State of one learner at a round boundary."""

    schema_version: Literal["spm-learner/1"] = "spm-learner/1"
    learner_id: str
    config: SpmConfig
    round: int = Field(ge=0, description="Last completed round")
    scalars: dict[str, float] = Field(default_factory=dict)
    vectors: dict[str, list[float]] = Field(default_factory=dict)
    reservoirs: list[list[float]] | None = None
    rng_state: dict[str, Any] | None = None


class RunCheckpoint(BaseModel):
    """State of one replication at a round boundary, with the experiment it belongs to."""

    schema_version: Literal["spm-run/1"] = "spm-run/1"
    horizon: int
    replication: int
    master_seed: int
    experiment: ExperimentConfig
    learner: LearnerCheckpoint
    sampling_rng_state: dict[str, Any]
    accumulators: dict[str, list[float]]
    pulls: list[int]
