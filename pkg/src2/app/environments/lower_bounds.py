"""
Lower-bound instances under the soft-sparsity constraint
E[(sum_i |l_i|^(2/alpha))^alpha] <= U.

Stochastic: l = -1 w.p. D, -e_{i*} w.p. D, 0 otherwise, D = U / (K^alpha + 1).
The best arm is a Bernoulli(2D) gain, every other arm Bernoulli(D).

Adversarial: l = -1 w.p. eta, -e_target w.p. epsilon, 0 otherwise, where
(eta, epsilon) solve
    eta K^alpha + epsilon = U,    (T/K) 8 epsilon^2 / eta = 1
and should also satisfy eta + epsilon <= 1/4 and eta K^alpha >= U/2.
"""
import math

import numpy as np

from ..exceptions import InvalidRegime
from ..models.environment import LowerBoundAdversarialSpec, LowerBoundParams, LowerBoundStochasticSpec
from .base import LossEnvironment


def _check_regime(num_arms: int, alpha: float, soft_sparsity: float) -> None:
    if num_arms < 4:
        raise InvalidRegime("lower-bound instances need K >= 4", num_arms=num_arms)
    if not 0.0 < alpha < 1.0:
        raise InvalidRegime("alpha must lie in (0, 1)", alpha=alpha)
    ceiling = num_arms ** alpha / 4.0
    if not 1.0 <= soft_sparsity <= ceiling:
        raise InvalidRegime("U must lie in [1, K^alpha / 4]", U=soft_sparsity, ceiling=ceiling)


def lower_bound_adv_params(num_arms: int, horizon: int, alpha: float, soft_sparsity: float) -> LowerBoundParams:
    """
    Solve for (eta, epsilon) and report the residual of every condition.

    sqrt(eta) is the positive root of K^alpha s^2 + sqrt(K/8T) s - U = 0,
    evaluated in the cancellation-free form 2U / (sqrt(c) + sqrt(c + 4 K^alpha U)).
    eta + epsilon <= 1/4 is reported through `sum_slack`, not enforced.
    """
    _check_regime(num_arms, alpha, soft_sparsity)
    if horizon < 4 * num_arms:
        raise InvalidRegime("horizon must be at least 4K", horizon=horizon, num_arms=num_arms)

    k_alpha = num_arms ** alpha
    c = num_arms / (8.0 * horizon)
    root = 2.0 * soft_sparsity / (math.sqrt(c) + math.sqrt(c + 4.0 * k_alpha * soft_sparsity))
    eta = root * root
    epsilon = math.sqrt(eta * c)
    return LowerBoundParams(
        eta=eta,
        epsilon=epsilon,
        sum_slack=0.25 - (eta + epsilon),
        soft_sparsity_residual=eta * k_alpha + epsilon - soft_sparsity,
        information_residual=(horizon / num_arms) * 8.0 * epsilon ** 2 / eta - 1.0,
        half_u_slack=eta * k_alpha - soft_sparsity / 2.0,
    )


class _TwoLevelEnvironment(LossEnvironment):
    """-1 everywhere w.p. dense, -e_arm w.p. single, 0 otherwise."""

    def __init__(self, num_arms: int, horizon: int, loss_range, arm: int, dense: float, single: float):
        super().__init__(num_arms, horizon, loss_range)
        self.arm = arm
        self.dense = dense
        self.single = single

    @property
    def mean_losses(self) -> np.ndarray:
        means = np.full(self.num_arms, -self.dense)
        means[self.arm] -= self.single
        return means

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        u = rng.random()
        losses = np.zeros(self.num_arms)
        if u < self.dense:
            losses[:] = -1.0
        elif u < self.dense + self.single:
            losses[self.arm] = -1.0
        return losses, None


class LowerBoundStochasticEnvironment(_TwoLevelEnvironment):
    kind = "lower_bound_stochastic"

    def __init__(self, spec: LowerBoundStochasticSpec, horizon: int):
        _check_regime(spec.num_arms, spec.alpha, spec.U)
        self.delta_min = spec.delta_min
        super().__init__(spec.num_arms, horizon, spec.loss_range, spec.best_arm, self.delta_min, self.delta_min)


class LowerBoundAdversarialEnvironment(_TwoLevelEnvironment):
    kind = "lower_bound_adversarial"

    def __init__(self, spec: LowerBoundAdversarialSpec, horizon: int):
        self.params = lower_bound_adv_params(spec.num_arms, horizon, spec.alpha, spec.U)
        super().__init__(
            spec.num_arms, horizon, spec.loss_range, spec.target_arm, self.params.eta, self.params.epsilon
        )
