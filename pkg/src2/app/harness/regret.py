"""
Regret accounting.

=============================================================================
FOUR REGRET FIGURES PER REPLICATION
=============================================================================

With l_t the full loss vector of round t and I_t the played arm:

  realized   sum_t l_{t,I_t}       - min_a sum_t l_{t,a}
  expected   sum_t <p_t, l_t>      - min_a sum_t l_{t,a}
  pseudo     sum_t <p_t, mu>       - T min_a mu_a           (mean losses known)
  sleeping   max_a sum_t 1{a in A_t} (l_{t,I_t} - l_{t,a})  (active sets present)

`expected` removes the sampling noise of I_t and is what summaries and
acceptance use; `realized` is kept for audit.

RegretAccumulator folds rounds in as they are played, so a replication
never stores its trajectory; compute_regret replays stored RoundLogs
through the same accumulator.
=============================================================================
"""
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..models.experiment import ExperimentConfig, HorizonSummary, RegretSummary, ResultRow
from ..models.rounds import RoundLog


@dataclass(frozen=True)
class RegretBreakdown:
    """Regret of one trajectory against every fixed arm."""

    realized: float
    expected: float
    best_arm: int
    arm_losses: np.ndarray
    pulls: np.ndarray
    pseudo: float | None = None
    sleeping: float | None = None
    sleeping_per_action: np.ndarray | None = None


class RegretAccumulator:
    """Streaming sums for the four regret figures."""

    def __init__(self, num_arms: int, means: np.ndarray | None = None, sleeping: bool = False):
        self.num_arms = num_arms
        self.means = None if means is None else np.asarray(means, dtype=float)
        self.learner_loss = 0.0
        self.expected_loss = 0.0
        self.mean_loss = 0.0
        self.rounds = 0
        self.arm_losses = np.zeros(num_arms)
        self.pulls = np.zeros(num_arms, dtype=int)
        self.sleeping = np.zeros(num_arms) if sleeping else None

    def update(
        self,
        arm: int,
        p: np.ndarray,
        losses: np.ndarray,
        active: np.ndarray | None = None,
    ) -> float:
        """Fold in one round; returns <p_t, l_t>."""
        expected = float(np.dot(p, losses))
        played = float(losses[arm])
        self.learner_loss += played
        self.expected_loss += expected
        self.arm_losses += losses
        self.pulls[arm] += 1
        self.rounds += 1
        if self.means is not None:
            self.mean_loss += float(np.dot(p, self.means))
        if self.sleeping is not None:
            mask = np.ones(self.num_arms, dtype=bool) if active is None else active
            self.sleeping += np.where(mask, played - losses, 0.0)
        return expected

    def result(self) -> RegretBreakdown:
        best_arm = int(np.argmin(self.arm_losses))
        best = float(self.arm_losses[best_arm])
        pseudo = None
        if self.means is not None:
            pseudo = self.mean_loss - self.rounds * float(self.means.min())
        return RegretBreakdown(
            realized=self.learner_loss - best,
            expected=self.expected_loss - best,
            best_arm=best_arm,
            arm_losses=self.arm_losses.copy(),
            pulls=self.pulls.copy(),
            pseudo=pseudo,
            sleeping=None if self.sleeping is None else float(self.sleeping.max()),
            sleeping_per_action=None if self.sleeping is None else self.sleeping.copy(),
        )

    # =========================================================================
    # Checkpoints
    # =========================================================================
    def state(self) -> tuple[dict[str, list[float]], list[int]]:
        accumulators = {
            "totals": [self.learner_loss, self.expected_loss, self.mean_loss, float(self.rounds)],
            "arm_losses": [float(v) for v in self.arm_losses],
        }
        if self.sleeping is not None:
            accumulators["sleeping"] = [float(v) for v in self.sleeping]
        return accumulators, [int(n) for n in self.pulls]

    def restore(self, accumulators: dict[str, list[float]], pulls: list[int]) -> None:
        self.learner_loss, self.expected_loss, self.mean_loss, rounds = accumulators["totals"]
        self.rounds = int(rounds)
        self.arm_losses = np.array(accumulators["arm_losses"], dtype=float)
        self.pulls = np.array(pulls, dtype=int)
        if "sleeping" in accumulators:
            self.sleeping = np.array(accumulators["sleeping"], dtype=float)


def compute_regret(
    logs: list[RoundLog],
    losses: np.ndarray,
    active: np.ndarray | None = None,
    means: np.ndarray | None = None,
) -> RegretBreakdown:
    """Regret of a captured trajectory against the full T x K loss matrix."""
    losses = np.asarray(losses, dtype=float)
    accumulator = RegretAccumulator(losses.shape[1], means, sleeping=active is not None)
    for log in logs:
        row = log.t - 1
        accumulator.update(log.arm, log.p, losses[row], None if active is None else active[row])
    return accumulator.result()


# =============================================================================
# Aggregation over replications
# =============================================================================
def _standard_error(values: pd.Series) -> float | None:
    if len(values) < 2:
        return None
    return float(values.std(ddof=1) / math.sqrt(len(values)))


def _optional_mean(values: pd.Series) -> float | None:
    values = values.dropna()
    return None if values.empty else float(values.mean())


def _ratio(numerator: float, denominator: float) -> float | None:
    if not denominator > 0.0 or not math.isfinite(denominator):
        return None
    return numerator / denominator


def summarize(rows: list[ResultRow], config: ExperimentConfig) -> RegretSummary:
    """
    Per-horizon means, standard errors and normalized ratios.

    Ratios divide the mean expected regret by sqrt(S T ln K) (sparse),
    ln T (log) and sqrt(Q ln K) (variation), with S and Q the replication
    means of the realized metrics.
    """
    frame = pd.DataFrame([row.model_dump() for row in rows])
    log_k = math.log(config.num_arms)
    horizons = []
    for horizon, group in frame.groupby("T", sort=True):
        horizon = int(horizon)
        expected_mean = float(group["expected_regret"].mean())
        s_mean = float(group["S_realized"].mean())
        q_mean = float(group["Q_realized"].mean())
        horizons.append(
            HorizonSummary(
                T=horizon,
                replications=len(group),
                realized_mean=float(group["realized_regret"].mean()),
                realized_se=_standard_error(group["realized_regret"]),
                expected_mean=expected_mean,
                expected_se=_standard_error(group["expected_regret"]),
                pseudo_mean=_optional_mean(group["pseudo_regret"]),
                sleeping_mean=_optional_mean(group["sleeping_regret"]),
                best_arm=int(group["best_arm"].mode().min()),
                S_mean=s_mean,
                Q_mean=q_mean,
                Lstar_mean=float(group["Lstar"].mean()),
                ratios={
                    "sparse": _ratio(expected_mean, math.sqrt(s_mean * horizon * log_k)),
                    "log": _ratio(expected_mean, math.log(horizon)),
                    "variation": _ratio(expected_mean, math.sqrt(q_mean * log_k)),
                },
            )
        )
    return RegretSummary(config=config, horizons=horizons)
