"""
CSV loaders for scripted adversaries.

Loss matrices are headerless decimal CSVs with T rows and K columns;
availability masks are parallel 0/1 CSVs.
"""
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import ConfigError


logger = logging.getLogger(__name__)


def _read_matrix(path: str | Path, what: str) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{what} file not found", path=str(path))
    frame = pd.read_csv(path, header=None, dtype=float, float_precision="round_trip")
    if frame.isna().any().any():
        raise ConfigError(f"{what} file has missing entries", path=str(path))
    logger.debug("[loaders] Read %s %s from %s", what, frame.shape, path)
    return frame.to_numpy(dtype=float)


def load_loss_matrix(path: str | Path, num_arms: int | None = None) -> np.ndarray:
    losses = _read_matrix(path, "loss matrix")
    if num_arms is not None and losses.shape[1] != num_arms:
        raise ConfigError("loss matrix column count does not match K", columns=losses.shape[1], num_arms=num_arms)
    return losses


def load_mask(path: str | Path, num_arms: int | None = None) -> np.ndarray:
    raw = _read_matrix(path, "availability mask")
    if not np.isin(raw, (0.0, 1.0)).all():
        raise ConfigError("availability mask entries must be 0 or 1", path=str(path))
    if num_arms is not None and raw.shape[1] != num_arms:
        raise ConfigError("mask column count does not match K", columns=raw.shape[1], num_arms=num_arms)
    return raw.astype(bool)


def save_matrix(path: str | Path, matrix: np.ndarray) -> None:
    """Write a matrix in the same headerless format the loaders read."""
    frame = pd.DataFrame(np.asarray(matrix))
    if frame.dtypes.apply(lambda d: d == bool).all():
        frame = frame.astype(int)
    frame.to_csv(path, header=False, index=False, float_format="%.17g")
