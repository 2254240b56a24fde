"""
SPM Configuration Model - constants shared by every SPM learner.

=============================================================================
CONSTANT PROFILES
=============================================================================

  standard : beta_1 = 8K / (1 - alpha),  gamma = max(6, 48 * sqrt(alpha / (1 - alpha)))
  oftrl    : beta_1 = 4K / (1 - alpha),  gamma = max(3, 48 * sqrt(alpha / (1 - alpha)))

`standard` is what the hybrid, coordinate-wise, sleeping and reservoir
learners are analysed with. `oftrl` is the lighter optimistic-FTRL variant
and is selectable for the reservoir learner. Explicit beta_1 / gamma values
override either profile.
=============================================================================
"""
import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


ConstantProfile = Literal["standard", "oftrl"]


class SpmConfig(BaseModel):
    """Arm count, horizon and the SPM constants (alpha, beta_1, gamma, d)."""

    model_config = ConfigDict(frozen=True)

    num_arms: int = Field(ge=3, description="Number of arms K")
    horizon: int = Field(ge=1, description="Horizon T, at least 4K")
    alpha: float = Field(gt=0.0, lt=1.0, description="Tsallis exponent")
    beta1: float = Field(gt=0.0, description="Initial learning rate beta_1")
    gamma: float = Field(gt=0.0, description="Log-barrier weight")
    d: float = Field(default=2.0, gt=1.0, description="Stability constant")
    profile: ConstantProfile = Field(default="standard")

    @model_validator(mode="after")
    def _horizon_covers_arms(self) -> "SpmConfig":
        if self.horizon < 4 * self.num_arms:
            raise ValueError(f"horizon {self.horizon} must be at least 4K = {4 * self.num_arms}")
        return self

    @classmethod
    def defaults(
        cls,
        num_arms: int,
        horizon: int,
        alpha: float,
        d: float = 2.0,
        profile: ConstantProfile = "standard",
        beta1: float | None = None,
        gamma: float | None = None,
    ) -> "SpmConfig":
        """Fill beta_1 and gamma from the constant profile unless given."""
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        if profile == "standard":
            default_beta1 = 8.0 * num_arms / (1.0 - alpha)
            gamma_floor = 6.0
        else:
            default_beta1 = 4.0 * num_arms / (1.0 - alpha)
            gamma_floor = 3.0
        default_gamma = max(gamma_floor, 48.0 * math.sqrt(alpha / (1.0 - alpha)))
        return cls(
            num_arms=num_arms,
            horizon=horizon,
            alpha=alpha,
            beta1=default_beta1 if beta1 is None else beta1,
            gamma=default_gamma if gamma is None else gamma,
            d=d,
            profile=profile,
        )

    # =========================================================================
    # Derived constants used by the z / h rules and the lemma checks
    # =========================================================================
    @property
    def sparse_coefficient(self) -> float:
        """(6d)^(2-alpha) / (2(1-alpha))"""
        return (6.0 * self.d) ** (2.0 - self.alpha) / (2.0 * (1.0 - self.alpha))

    @property
    def sleeping_coefficient(self) -> float:
        """(4d)^(2-alpha) / (1-alpha)"""
        return (4.0 * self.d) ** (2.0 - self.alpha) / (1.0 - self.alpha)

    @property
    def rate_cap(self) -> float:
        """18 d^2 / gamma, the bound on z_t / beta_t."""
        return 18.0 * self.d ** 2 / self.gamma

    @property
    def penalty_floor(self) -> float:
        """((1-alpha) / (4 alpha)) * T^(-alpha)"""
        return (1.0 - self.alpha) / (4.0 * self.alpha) * self.horizon ** (-self.alpha)
