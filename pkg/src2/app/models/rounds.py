"""
Round records - what a learner consumes and what it reports back.

RoundOutcome is the observation handed to a learner; RoundLog is the
learner's full account of one round. Both are created once per simulated
round, so they are plain dataclasses holding numpy arrays.

RoundLog fields that only some learners produce are None elsewhere:
  q               - FTRL solution (None on reservoir exploration rounds)
  prediction      - optimistic prediction m_t (optimistic learners only)
  active          - boolean availability mask (sleeping only)
  loss_estimate   - full estimate vector (None for exp3)
  expected_loss   - <p_t, l_t>, filled in by the harness which sees l_t
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RoundOutcome:
    """The arm that was played, its observed loss and the active set."""

    arm: int
    loss: float
    active: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.active is not None and not bool(self.active[self.arm]):
            raise ValueError(f"arm {self.arm} is not in the active set")


@dataclass(slots=True)
class RoundLog:
    """Per-round trace used by regret accounting, CSV output and lemma checks."""

    t: int
    arm: int
    loss: float
    p: np.ndarray
    beta: float | np.ndarray
    beta_next: float | np.ndarray
    z: float
    h: float | np.ndarray
    q: np.ndarray | None = None
    loss_estimate: np.ndarray | None = None
    prediction: np.ndarray | None = None
    active: np.ndarray | None = None
    exploration: bool = False
    warning: str | None = None
    expected_loss: float | None = None
