"""
Harness package - experiment runner, regret accounting, artifacts and CLI.

Exports:
- run_experiment / ReplicationRunner: play (T, replication) pairs
- RegretAccumulator / compute_regret / summarize: regret accounting
- run_verification: every numerical check behind `main.py verify`
- main: argparse entry point
"""
from .cli import main
from .regret import RegretAccumulator, RegretBreakdown, compute_regret, summarize
from .runner import (
    ExperimentResult,
    ReplicationResult,
    ReplicationRunner,
    build_spm_config,
    check_compatibility,
    check_pairing,
    run_experiment,
)
from .verification import run_verification

__all__ = [
    "ExperimentResult",
    "RegretAccumulator",
    "RegretBreakdown",
    "ReplicationResult",
    "ReplicationRunner",
    "build_spm_config",
    "check_compatibility",
    "check_pairing",
    "compute_regret",
    "main",
    "run_experiment",
    "run_verification",
    "summarize",
]
