"""
Adversarial regimes: scripted matrices, hard and soft sparsity, bounded variation.

All of them are oblivious: losses depend only on the environment stream.
"""
import logging

import numpy as np
from scipy.optimize import brentq

from ..exceptions import InvalidRegime
from ..models.environment import ScriptedSpec, SoftSparseSpec, SparseAdversarialSpec, VariationBoundedSpec
from ..models.vectors import LossRange
from .base import LossEnvironment, LossSchedule
from .loaders import load_loss_matrix
from .metrics import total_variation


logger = logging.getLogger(__name__)


class ScriptedEnvironment(LossEnvironment):
    """Replays the first T rows of a fixed loss matrix."""

    kind = "scripted"

    def __init__(self, spec: ScriptedSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        if spec.losses is not None:
            matrix = np.array(spec.losses, dtype=float)
        else:
            matrix = load_loss_matrix(spec.losses_path, spec.num_arms)
        if matrix.shape[0] < horizon:
            raise InvalidRegime("scripted losses are shorter than the horizon", rows=matrix.shape[0], horizon=horizon)
        self.matrix = matrix[:horizon]

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        return self.matrix[t - 1].copy(), None


class SparseAdversarialEnvironment(LossEnvironment):
    """
    At most S nonzero losses per round.

    Support: the best arm plus S-1 others drawn without replacement. A
    supported arm is hit with probability 1/2; the best arm with 1/2 + delta
    when hits are gains (-1) and 1/2 - delta when hits are losses (+1).
    """

    kind = "sparse_adversarial"

    def __init__(self, spec: SparseAdversarialSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        self.spec = spec
        self._hit = -1.0 if spec.loss_range is LossRange.SIGNED else 1.0
        shift = spec.delta if spec.loss_range is LossRange.SIGNED else -spec.delta
        self._best_probability = 0.5 + shift
        self._others = np.array([i for i in range(spec.num_arms) if i != spec.best_arm])

    @property
    def mean_losses(self) -> np.ndarray:
        spec = self.spec
        others_share = (spec.sparsity - 1) / (spec.num_arms - 1)
        means = np.full(spec.num_arms, self._hit * 0.5 * others_share)
        means[spec.best_arm] = self._hit * self._best_probability
        return means

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        spec = self.spec
        support = rng.choice(self._others, size=spec.sparsity - 1, replace=False)
        losses = np.zeros(spec.num_arms)
        hits = rng.random(spec.sparsity)
        if hits[0] < self._best_probability:
            losses[spec.best_arm] = self._hit
        losses[support[hits[1:] < 0.5]] = self._hit
        return losses, None


class SoftSparseEnvironment(LossEnvironment):
    """-1 on every arm w.p. pi, -1 on the best arm only w.p. gap, else 0."""

    kind = "soft_sparse"

    def __init__(self, spec: SoftSparseSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        self.spec = spec
        self.dense_probability = spec.dense_probability

    @property
    def mean_losses(self) -> np.ndarray:
        means = np.full(self.num_arms, -self.dense_probability)
        means[self.spec.best_arm] -= self.spec.gap
        return means

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        u = rng.random()
        losses = np.zeros(self.num_arms)
        if u < self.dense_probability:
            losses[:] = -1.0
        elif u < self.dense_probability + self.spec.gap:
            losses[self.spec.best_arm] = -1.0
        return losses, None


class VariationBoundedEnvironment(LossEnvironment):
    """
    l_t = clip(anchor + rho * noise_t, 0, 1), noise_t ~ Unif[-1, 1]^K.

    materialize() draws all noise first, then solves for rho with brentq so
    that the realized Q is within 5% of q_target. emit_round() needs a
    calibrated rho and is mainly useful after materialize().
    """

    kind = "variation_bounded"
    Q_TOLERANCE = 0.05
    RHO_CEILING = 64.0

    def __init__(self, spec: VariationBoundedSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        self.spec = spec
        self.anchor = np.array(spec.anchor, dtype=float)
        self.rho: float | None = None

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, None]:
        self._check_round(t)
        if self.rho is None:
            raise RuntimeError("variation_bounded environment is not calibrated; call materialize() first")
        noise = rng.uniform(-1.0, 1.0, self.num_arms)
        return np.clip(self.anchor + self.rho * noise, 0.0, 1.0), None

    def materialize(self, rng: np.random.Generator) -> LossSchedule:
        noise = rng.uniform(-1.0, 1.0, (self.horizon, self.num_arms))
        target = self.spec.q_target

        def excess(rho: float) -> float:
            return total_variation(np.clip(self.anchor + rho * noise, 0.0, 1.0)) - target

        high = 1.0
        while excess(high) < 0.0:
            if high >= self.RHO_CEILING:
                raise InvalidRegime(
                    "q_target is not reachable at this horizon",
                    q_target=target,
                    q_max=excess(high) + target,
                    horizon=self.horizon,
                )
            high *= 2.0
        self.rho = float(brentq(excess, 0.0, high, xtol=1e-12, rtol=1e-10))
        losses = np.clip(self.anchor + self.rho * noise, 0.0, 1.0)

        realized = total_variation(losses)
        if abs(realized - target) > self.Q_TOLERANCE * target:
            raise InvalidRegime("realized Q misses its target", realized=realized, q_target=target)
        logger.debug("[VariationBoundedEnvironment] rho=%.6g gives Q=%.6g (target %.6g)", self.rho, realized, target)
        return self._schedule(losses)
