"""
Result artifacts: CSV through pandas, JSON through pydantic.

  results.csv            one row per (T, replication), documented columns first
  summary.json           RegretSummary
  roundlog-T{T}-r{r}.csv one row per round (capture=full)
  <lemma-id>.json        one LemmaReport per lemma id (verify)
  checkpoint-T{T}-r{r}.json  RunCheckpoint

Floats are written with "%.17g" and rows in a fixed order, so two runs
with the same seed produce byte-identical files.
"""
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..exceptions import ConfigError
from ..models.checkpoint import RunCheckpoint
from ..models.experiment import EXTRA_RESULT_COLUMNS, RESULT_COLUMNS, ExperimentConfig, RegretSummary, ResultRow
from ..models.reports import LemmaReport
from ..models.rounds import RoundLog


logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def results_path(out_dir: Path) -> Path:
    return Path(out_dir) / "results.csv"


def roundlog_path(out_dir: Path, horizon: int, replication: int) -> Path:
    return Path(out_dir) / f"roundlog-T{horizon}-r{replication}.csv"


def checkpoint_path(out_dir: Path, horizon: int, replication: int) -> Path:
    return Path(out_dir) / f"checkpoint-T{horizon}-r{replication}.json"


# =============================================================================
# Tabular
# =============================================================================
def write_results(rows: list[ResultRow], path: Path) -> Path:
    rows = sorted(rows, key=lambda row: (row.T, row.replication))
    frame = pd.DataFrame([row.model_dump() for row in rows], columns=RESULT_COLUMNS + EXTRA_RESULT_COLUMNS)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info("[writers] Wrote %d result rows to %s", len(frame), path)
    return path


def read_results(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def _expand(columns: dict[str, list], name: str, values: list[np.ndarray | float | None]) -> None:
    """Scalar fields become one column, vector fields one column per arm."""
    first = next((v for v in values if v is not None), None)
    if first is None:
        return
    if np.ndim(first) == 0:
        columns[name] = [None if v is None else float(v) for v in values]
        return
    for i in range(len(first)):
        columns[f"{name}_{i}"] = [None if v is None else float(v[i]) for v in values]


def write_roundlog(logs: list[RoundLog], path: Path) -> Path:
    columns: dict[str, list] = {
        "t": [log.t for log in logs],
        "arm": [log.arm for log in logs],
        "loss": [log.loss for log in logs],
        "expected_loss": [log.expected_loss for log in logs],
        "z": [log.z for log in logs],
        "exploration": [int(log.exploration) for log in logs],
    }
    for name in ("beta", "beta_next", "h", "p", "q", "loss_estimate", "prediction"):
        _expand(columns, name, [getattr(log, name) for log in logs])
    if any(log.active is not None for log in logs):
        _expand(columns, "active", [None if log.active is None else log.active.astype(float) for log in logs])
    columns["warning"] = [log.warning or "" for log in logs]
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(columns).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug("[writers] Wrote round log %s", path)
    return path


# =============================================================================
# JSON documents
# =============================================================================
def write_summary(summary: RegretSummary, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(summary.model_dump_json(indent=2))
    return path


def read_summary(path: Path) -> RegretSummary:
    try:
        return RegretSummary.model_validate_json(Path(path).read_text())
    except FileNotFoundError as e:
        raise ConfigError("summary file not found", path=str(path)) from e
    except ValidationError as e:
        raise ConfigError("summary file is not a valid summary", path=str(path), errors=e.error_count()) from e


def write_report(report: LemmaReport, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{report.lemma_id}.json"
    path.write_text(report.model_dump_json(indent=2))
    return path


def write_checkpoint(checkpoint: RunCheckpoint, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(checkpoint.model_dump_json())
    logger.debug("[writers] Checkpoint at round %d written to %s", checkpoint.learner.round, path)
    return path


def read_checkpoint(path: Path) -> RunCheckpoint:
    try:
        return RunCheckpoint.model_validate_json(Path(path).read_text())
    except FileNotFoundError as e:
        raise ConfigError("checkpoint file not found", path=str(path)) from e
    except ValidationError as e:
        raise ConfigError("checkpoint file is not a valid checkpoint", path=str(path), errors=e.error_count()) from e


def load_config_dict(path: Path) -> dict:
    """Raw experiment config, before CLI flags are overlaid."""
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as e:
        raise ConfigError("config file not found", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigError("config file is not valid JSON", path=str(path), line=e.lineno) from e


def validate_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigError(f"invalid experiment config: {location}: {first['msg']}", errors=e.error_count()) from e
