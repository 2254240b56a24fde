"""
Lemma Reports - outcome of one numerical property check.

A check evaluates a slack (bound minus quantity) per trial or per round; a
trial violates when its slack is below -tolerance. Reports from independent
batches merge associatively, so trials can be fanned out and folded back in
any order.
"""
import math
from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, Field


class LemmaReport(BaseModel):
    """Trials, violations and the tightest case seen for one lemma id."""

    lemma_id: str
    trials: int = 0
    violations: int = 0
    worst_slack: float = math.inf
    tolerance: float = 0.0
    witness: dict[str, Any] | None = Field(default=None, description="Inputs of the tightest trial")
    details: dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @classmethod
    def from_slacks(
        cls,
        lemma_id: str,
        slacks: np.ndarray,
        tolerance: float,
        witness: Callable[[int], dict[str, Any]] | None = None,
        **details: float,
    ) -> "LemmaReport":
        slacks = np.asarray(slacks, dtype=float).ravel()
        if slacks.size == 0:
            return cls(lemma_id=lemma_id, tolerance=tolerance, details=details)
        # nan slacks count as violations
        bad = ~(slacks >= -tolerance)
        worst = int(np.nanargmin(slacks)) if not np.all(np.isnan(slacks)) else 0
        return cls(
            lemma_id=lemma_id,
            trials=int(slacks.size),
            violations=int(bad.sum()),
            worst_slack=float(slacks[worst]),
            tolerance=tolerance,
            witness=witness(worst) if witness is not None else None,
            details=details,
        )

    def merge(self, other: "LemmaReport") -> "LemmaReport":
        if other.lemma_id != self.lemma_id:
            raise ValueError(f"cannot merge {other.lemma_id} into {self.lemma_id}")
        tighter = self if self.worst_slack <= other.worst_slack else other
        return LemmaReport(
            lemma_id=self.lemma_id,
            trials=self.trials + other.trials,
            violations=self.violations + other.violations,
            worst_slack=min(self.worst_slack, other.worst_slack),
            tolerance=max(self.tolerance, other.tolerance),
            witness=tighter.witness,
            details={**self.details, **other.details},
        )
