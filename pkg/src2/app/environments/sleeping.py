"""Sleeping regime: an active set A_t each round, losses for every arm."""
import numpy as np

from ..exceptions import InvalidRegime
from ..models.environment import SleepingSpec
from .base import LossEnvironment
from .loaders import load_loss_matrix, load_mask


class SleepingEnvironment(LossEnvironment):
    """
    Random availability: each arm active independently with active_prob,
    redrawn until A_t is nonempty. Scripted availability: row t of the mask.

    Losses are Bernoulli(means) unless a loss matrix is scripted; inactive
    arms still get a loss so per-action regret can be evaluated later.
    """

    kind = "sleeping"
    MAX_REDRAWS = 10_000

    def __init__(self, spec: SleepingSpec, horizon: int):
        super().__init__(spec.num_arms, horizon, spec.loss_range)
        self.spec = spec
        self.mask = self._scripted_mask(spec, horizon)
        self.scripted_losses = self._scripted_losses(spec, horizon)
        self._means = None if spec.means is None else np.array(spec.means, dtype=float)

    @staticmethod
    def _scripted_mask(spec: SleepingSpec, horizon: int) -> np.ndarray | None:
        if spec.availability != "scripted":
            return None
        mask = np.array(spec.mask, dtype=bool) if spec.mask is not None else load_mask(spec.mask_path, spec.num_arms)
        if mask.shape[0] < horizon:
            raise InvalidRegime("availability script is shorter than the horizon", rows=mask.shape[0], horizon=horizon)
        mask = mask[:horizon]
        empty = np.flatnonzero(~mask.any(axis=1))
        if empty.size:
            raise InvalidRegime("availability script has a round with no active arm", round=int(empty[0]) + 1)
        return mask

    @staticmethod
    def _scripted_losses(spec: SleepingSpec, horizon: int) -> np.ndarray | None:
        if spec.losses is None and spec.losses_path is None:
            return None
        losses = (
            np.array(spec.losses, dtype=float)
            if spec.losses is not None
            else load_loss_matrix(spec.losses_path, spec.num_arms)
        )
        if losses.shape[0] < horizon:
            raise InvalidRegime("scripted losses are shorter than the horizon", rows=losses.shape[0], horizon=horizon)
        return losses[:horizon]

    @property
    def mean_losses(self) -> np.ndarray | None:
        if self.scripted_losses is not None or self._means is None:
            return None
        return self._means.copy()

    def emit_round(self, t: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        self._check_round(t)
        if self.mask is not None:
            active = self.mask[t - 1].copy()
        else:
            active = self._draw_active(rng)
        if self.scripted_losses is not None:
            losses = self.scripted_losses[t - 1].copy()
        else:
            losses = (rng.random(self.num_arms) < self._means).astype(float)
        return losses, active

    def _draw_active(self, rng: np.random.Generator) -> np.ndarray:
        for _ in range(self.MAX_REDRAWS):
            active = rng.random(self.num_arms) < self.spec.active_prob
            if active.any():
                return active
        raise InvalidRegime("could not draw a nonempty active set", active_prob=self.spec.active_prob)
