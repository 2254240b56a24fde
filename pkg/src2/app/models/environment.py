"""
Environment Models - declarative descriptions of loss sequences.

=============================================================================
ONE SPEC PER REGIME
=============================================================================

Every spec is a pydantic model with a literal `kind`; EnvSpec is the
discriminated union the experiment config accepts. A spec carries what is
needed to generate losses for any horizon; the horizon itself comes from
the experiment's horizon grid and is passed to the environment factory.

  kind                       losses    notes
  stochastic_gaps            [0, 1]    Bernoulli / uniform around base + gap
  self_bounding              [0, 1]    stochastic gaps, first floor(C) rounds corrupted
  scripted                   declared  T x K matrix inline or from CSV
  sparse_adversarial         declared  at most S nonzero losses per round
  soft_sparse                [-1, 0]   sparsity holds in expectation only
  variation_bounded          [0, 1]    anchor + scaled noise, realized Q calibrated
  sleeping                   [0, 1]    random or scripted availability
  lower_bound_stochastic     [-1, 0]   gap U / (K^alpha + 1)
  lower_bound_adversarial    [-1, 0]   (eta, epsilon) instance
=============================================================================
"""
from typing import Annotated, ClassVar, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .vectors import LossRange


class _EnvSpecBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # set on kinds whose losses can only come from one range
    fixed_range: ClassVar[LossRange | None] = None

    num_arms: int = Field(ge=2, description="Number of arms K")
    loss_range: LossRange = Field(default=LossRange.UNIT)

    @model_validator(mode="before")
    @classmethod
    def _default_fixed_range(cls, data):
        if isinstance(data, dict) and cls.fixed_range is not None and "loss_range" not in data:
            data = {**data, "loss_range": cls.fixed_range}
        return data

    @model_validator(mode="after")
    def _check_fixed_range(self):
        if self.fixed_range is not None and self.loss_range is not self.fixed_range:
            raise ValueError(f"{self.kind} losses are always {self.fixed_range.value}")
        return self


def _check_arm(arm: int, num_arms: int, name: str) -> None:
    if not 0 <= arm < num_arms:
        raise ValueError(f"{name} {arm} outside [0, {num_arms})")


# =============================================================================
# STOCHASTIC REGIMES
# =============================================================================

class StochasticGapsSpec(_EnvSpecBase):
    """
    I.i.d. losses with mean base_mean + gaps[i].

    Give either the full gap vector or delta_min (arm 0 optimal, every other
    arm delta_min worse).
    """
    fixed_range: ClassVar[LossRange | None] = LossRange.UNIT

    kind: Literal["stochastic_gaps"] = "stochastic_gaps"
    gaps: list[float] | None = Field(default=None, description="Gap vector, one entry per arm")
    delta_min: float | None = Field(default=None, gt=0.0, le=1.0)
    base_mean: float = Field(default=0.5, ge=0.0, le=1.0)
    distribution: Literal["bernoulli", "uniform"] = "bernoulli"

    @model_validator(mode="after")
    def _resolve_gaps(self):
        if self.gaps is None:
            if self.delta_min is None:
                raise ValueError("either gaps or delta_min is required")
            object.__setattr__(self, "gaps", [0.0] + [self.delta_min] * (self.num_arms - 1))
        if len(self.gaps) != self.num_arms:
            raise ValueError(f"gaps has {len(self.gaps)} entries for {self.num_arms} arms")
        if min(self.gaps) < 0.0:
            raise ValueError("gaps must be nonnegative")
        if any(not 0.0 <= self.base_mean + g <= 1.0 for g in self.gaps):
            raise ValueError("base_mean + gap must lie in [0, 1] for every arm")
        return self

    @property
    def means(self) -> list[float]:
        return [self.base_mean + g for g in self.gaps]


class SelfBoundingSpec(StochasticGapsSpec):
    """Stochastic gaps plus a corruption budget C spent on the first floor(C) rounds."""

    kind: Literal["self_bounding"] = "self_bounding"
    corruption: float = Field(default=0.0, ge=0.0, description="Corruption budget C")


# =============================================================================
# ADVERSARIAL REGIMES
# =============================================================================

class ScriptedSpec(_EnvSpecBase):
    """Fixed loss matrix, inline or loaded from a headerless decimal CSV."""

    kind: Literal["scripted"] = "scripted"
    losses: list[list[float]] | None = None
    losses_path: str | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.losses is None) == (self.losses_path is None):
            raise ValueError("give exactly one of losses / losses_path")
        if self.losses is not None and any(len(row) != self.num_arms for row in self.losses):
            raise ValueError(f"every loss row needs {self.num_arms} entries")
        return self


class SparseAdversarialSpec(_EnvSpecBase):
    """
    Hard-sparse losses: at most S arms have a nonzero loss each round.

    The support is the best arm plus S-1 arms drawn uniformly from the rest.
    Each supported arm's loss is nonzero with probability 1/2, raised to
    1/2 + delta (signed: a gain of -1) or lowered to 1/2 - delta (unit: a
    loss of 1) for the best arm.
    """
    kind: Literal["sparse_adversarial"] = "sparse_adversarial"
    loss_range: LossRange = Field(default=LossRange.SIGNED)
    sparsity: int = Field(ge=1, description="Sparsity S")
    delta: float = Field(default=0.1, gt=0.0, lt=0.5)
    best_arm: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        if self.sparsity > self.num_arms:
            raise ValueError(f"sparsity {self.sparsity} exceeds K = {self.num_arms}")
        _check_arm(self.best_arm, self.num_arms, "best_arm")
        return self


class SoftSparseSpec(_EnvSpecBase):
    """
    Sparsity in expectation only.

    With probability pi every arm gains 1 (loss -1); with probability gap
    only the best arm does. pi = (U - gap) / K^alpha so that
    E[(sum_i |l_i|^(2/alpha))^alpha] = U exactly.
    """
    fixed_range: ClassVar[LossRange | None] = LossRange.SIGNED

    kind: Literal["soft_sparse"] = "soft_sparse"
    alpha: float = Field(gt=0.0, lt=1.0)
    U: float = Field(gt=0.0, description="Soft-sparsity level")
    gap: float = Field(default=0.05, gt=0.0, lt=1.0)
    best_arm: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        _check_arm(self.best_arm, self.num_arms, "best_arm")
        if self.U < self.gap:
            raise ValueError(f"U = {self.U} must be at least gap = {self.gap}")
        if self.dense_probability + self.gap > 1.0:
            raise ValueError("U too large: mixture probabilities exceed 1")
        return self

    @property
    def dense_probability(self) -> float:
        return (self.U - self.gap) / self.num_arms ** self.alpha


class VariationBoundedSpec(_EnvSpecBase):
    """
    l_t = clip(anchor + rho * noise_t, 0, 1) with noise_t ~ Unif[-1, 1]^K.

    rho is calibrated on the realized noise so that the total variation
    Q = sum_t ||l_t - mean||^2 matches q_target.
    """
    fixed_range: ClassVar[LossRange | None] = LossRange.UNIT

    kind: Literal["variation_bounded"] = "variation_bounded"
    q_target: float = Field(gt=0.0, description="Target total variation Q")
    anchor: list[float] | None = Field(default=None, description="Per-arm center, default 0.4 then 0.5")

    @model_validator(mode="after")
    def _resolve_anchor(self):
        if self.anchor is None:
            object.__setattr__(self, "anchor", [0.4] + [0.5] * (self.num_arms - 1))
        if len(self.anchor) != self.num_arms or any(not 0.0 <= a <= 1.0 for a in self.anchor):
            raise ValueError(f"anchor needs {self.num_arms} entries in [0, 1]")
        return self


class SleepingSpec(_EnvSpecBase):
    """
    Varying active sets.

    availability="random": each arm active independently with active_prob,
    redrawn until nonempty. availability="scripted": a T x K 0/1 mask inline
    or from CSV. Losses are Bernoulli(means) unless a loss matrix is given.
    """
    kind: Literal["sleeping"] = "sleeping"
    availability: Literal["random", "scripted"] = "random"
    active_prob: float = Field(default=0.7, gt=0.0, le=1.0)
    mask: list[list[int]] | None = None
    mask_path: str | None = None
    means: list[float] | None = None
    losses: list[list[float]] | None = None
    losses_path: str | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.availability == "scripted" and (self.mask is None) == (self.mask_path is None):
            raise ValueError("scripted availability needs exactly one of mask / mask_path")
        if self.losses is not None and self.losses_path is not None:
            raise ValueError("give at most one of losses / losses_path")
        if self.means is None and self.losses is None and self.losses_path is None:
            step = 0.4 / max(1, self.num_arms - 1)
            object.__setattr__(self, "means", [0.3 + step * i for i in range(self.num_arms)])
        if self.means is not None and (
            len(self.means) != self.num_arms or any(not 0.0 <= m <= 1.0 for m in self.means)
        ):
            raise ValueError(f"means needs {self.num_arms} entries in [0, 1]")
        return self


# =============================================================================
# LOWER-BOUND INSTANCES
# =============================================================================

class LowerBoundStochasticSpec(_EnvSpecBase):
    """
    l_t = -1 w.p. D, -e_{i*} w.p. D, 0 otherwise, with D = U / (K^alpha + 1).

    Regime checks (K >= 4, 1 <= U <= K^alpha / 4) happen when the
    environment is built and raise InvalidRegime.
    """
    fixed_range: ClassVar[LossRange | None] = LossRange.SIGNED

    kind: Literal["lower_bound_stochastic"] = "lower_bound_stochastic"
    alpha: float = Field(gt=0.0, lt=1.0)
    U: float = Field(gt=0.0)
    best_arm: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        _check_arm(self.best_arm, self.num_arms, "best_arm")
        return self

    @property
    def delta_min(self) -> float:
        return self.U / (self.num_arms ** self.alpha + 1.0)


class LowerBoundAdversarialSpec(_EnvSpecBase):
    """
    l_t = -1 w.p. eta, -e_{target} w.p. epsilon, 0 otherwise.

    (eta, epsilon) depend on the horizon and are solved when the
    environment is built.
    """
    fixed_range: ClassVar[LossRange | None] = LossRange.SIGNED

    kind: Literal["lower_bound_adversarial"] = "lower_bound_adversarial"
    alpha: float = Field(gt=0.0, lt=1.0)
    U: float = Field(gt=0.0)
    target_arm: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check(self):
        _check_arm(self.target_arm, self.num_arms, "target_arm")
        return self


EnvSpec = Annotated[
    Union[
        StochasticGapsSpec,
        SelfBoundingSpec,
        ScriptedSpec,
        SparseAdversarialSpec,
        SoftSparseSpec,
        VariationBoundedSpec,
        SleepingSpec,
        LowerBoundStochasticSpec,
        LowerBoundAdversarialSpec,
    ],
    Field(discriminator="kind"),
]


class LowerBoundParams(BaseModel):
    """Solved (eta, epsilon) and the residuals of their defining system."""

    eta: float
    epsilon: float
    sum_slack: float = Field(description="1/4 - (eta + epsilon); negative means the bound fails")
    soft_sparsity_residual: float = Field(description="eta K^alpha + epsilon - U")
    information_residual: float = Field(description="(T/K) 8 epsilon^2 / eta - 1")
    half_u_slack: float = Field(description="eta K^alpha - U/2")

    @property
    def satisfied(self) -> bool:
        return (
            self.sum_slack >= 0.0
            and abs(self.soft_sparsity_residual) <= 1e-9
            and abs(self.information_residual) <= 1e-9
            and self.half_u_slack >= -1e-12
        )


# =============================================================================
# METRICS
# =============================================================================

class EnvMetrics(BaseModel):
    """Data-dependent quantities recomputed from a realized loss matrix."""

    s_max: int = Field(description="Largest number of nonzero losses in a round")
    soft_sparsity: float | None = Field(default=None, description="Mean of (sum |l|^(2/alpha))^alpha")
    q: float = Field(description="Total variation around the empirical mean")
    q_inf: float | None = Field(default=None, description="Max-norm variation, grid upper estimate")
    q_inf_is_upper_estimate: bool = True
    l_star: float = Field(description="Loss of the best fixed arm")
    best_arm: int
    delta_min: float | None = Field(default=None, description="Smallest positive gap of the mean losses")
    per_arm_pulls: list[int] | None = None


class SoftSparsityReport(BaseModel):
    """Monte-Carlo estimate of E[(sum |l|^(2/alpha))^alpha] against U."""

    samples: int
    alpha: float
    U: float
    mean: float
    standard_error: float

    @property
    def lower(self) -> float:
        return self.mean - 3.0 * self.standard_error

    @property
    def upper(self) -> float:
        return self.mean + 3.0 * self.standard_error

    @property
    def violated(self) -> bool:
        """The whole 3-SE interval lies above U."""
        return self.lower > self.U
