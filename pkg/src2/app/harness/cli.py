"""
Command-line surface: run, verify, sweep, replay.

    python src2/main.py run --config experiments/stochastic.json --replications 20
    python src2/main.py verify --trials 100000
    python src2/main.py sweep --config experiments/sparse.json --param sparsity --values 2,32
    python src2/main.py replay --summary results/summary.json --T 4096 --replication 3
    python src2/main.py replay --checkpoint results/checkpoint-T4096-r3.json

Config files hold an ExperimentConfig as JSON; flags override file values.

Exit codes: 0 success, 2 configuration error, 3 verification failure.
"""
import argparse
import copy
import json
import logging
from pathlib import Path

import pandas as pd

from ..config.settings import settings
from ..exceptions import ConfigError
from ..learners.learner_registry import LearnerRegistry, default_registry
from ..oracles.lemma_checks import MIN_TECHNICAL_TRIALS
from .runner import ReplicationRunner, run_experiment
from .verification import DEFAULT_TECHNICAL_TRIALS, DEFAULT_TRAJECTORY_ROUNDS, run_verification
from .writers import (
    FLOAT_FORMAT,
    load_config_dict,
    read_checkpoint,
    read_summary,
    roundlog_path,
    validate_config,
    write_report,
    write_results,
    write_roundlog,
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3

SWEEP_PARAMS = ("sparsity", "q_target", "horizon")


# =============================================================================
# Parser
# =============================================================================
def _add_experiment_flags(parser: argparse.ArgumentParser, registry: LearnerRegistry) -> None:
    parser.add_argument("--config", type=Path, help="ExperimentConfig JSON file")
    parser.add_argument("--learner", help="Learner id:\n" + registry.get_descriptions())
    parser.add_argument("--env-kind", help="Environment kind (replaces the file's env when it differs)")
    parser.add_argument("--K", type=int, dest="num_arms", help="Number of arms")
    parser.add_argument(
        "--env-param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Environment field, VALUE parsed as JSON (repeatable), e.g. delta_min=0.25",
    )
    parser.add_argument("--horizons", type=int, nargs="+", help="Horizon grid")
    parser.add_argument("--replications", type=int)
    parser.add_argument("--seed", type=int, help="Master seed")
    parser.add_argument("--capture", choices=["summary", "full"])
    parser.add_argument("--checkpoint-every", type=int, help="Checkpoint each replication every N rounds")
    parser.add_argument("--timing", action="store_true", help="Fill wallclock_ms (output no longer byte-stable)")
    parser.add_argument("--compute-q-inf", action="store_true", help="Estimate the max-norm variation per row")
    parser.add_argument("--threads", type=int, help="Worker processes (default SPM_THREADS)")
    parser.add_argument("--out", type=Path, help="Output directory (default SPM_OUTPUT_DIR)")


def build_parser(registry: LearnerRegistry) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Stability-penalty-matching bandit simulator",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one experiment", formatter_class=argparse.RawTextHelpFormatter)
    _add_experiment_flags(run, registry)

    verify = commands.add_parser("verify", help="Numerical lemma and oracle checks")
    verify.add_argument("--trials", type=int, default=DEFAULT_TECHNICAL_TRIALS, help="Samples per inequality")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trajectory-rounds", type=int, default=DEFAULT_TRAJECTORY_ROUNDS)
    verify.add_argument("--out", type=Path, help="Report directory (default SPM_OUTPUT_DIR/verify)")

    sweep = commands.add_parser("sweep", help="Repeat an experiment over one parameter", formatter_class=argparse.RawTextHelpFormatter)
    _add_experiment_flags(sweep, registry)
    sweep.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    sweep.add_argument("--values", required=True, help="Comma-separated values")

    replay = commands.add_parser("replay", help="Re-run one replication with full capture")
    source = replay.add_mutually_exclusive_group(required=True)
    source.add_argument("--summary", type=Path, help="summary.json of the original run")
    source.add_argument("--checkpoint", type=Path, help="Resume a checkpointed replication")
    replay.add_argument("--T", type=int, dest="horizon")
    replay.add_argument("--replication", type=int, default=0)
    replay.add_argument("--out", type=Path)
    return parser


# =============================================================================
# Config overlay
# =============================================================================
def _parse_env_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise ConfigError("--env-param expects KEY=VALUE", value=pair)
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def overlay_flags(data: dict, args: argparse.Namespace) -> dict:
    """File values overridden by whichever flags were given."""
    data = copy.deepcopy(data)
    if args.learner:
        data.setdefault("learner", {})["id"] = args.learner

    env = dict(data.get("env", {}))
    if args.env_kind and args.env_kind != env.get("kind"):
        env = {"kind": args.env_kind, **({"num_arms": env["num_arms"]} if "num_arms" in env else {})}
    if args.num_arms is not None:
        env["num_arms"] = args.num_arms
    env.update(_parse_env_params(args.env_param))
    if env:
        data["env"] = env

    for flag, key in (
        ("horizons", "horizons"),
        ("replications", "replications"),
        ("seed", "seed"),
        ("capture", "capture"),
        ("checkpoint_every", "checkpoint_every"),
    ):
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    if args.timing:
        data["timing"] = True
    if args.compute_q_inf:
        data["compute_q_inf"] = True
    return data


def _experiment_data(args: argparse.Namespace) -> dict:
    data = load_config_dict(args.config) if args.config else {}
    return overlay_flags(data, args)


def _out_dir(args: argparse.Namespace, default: Path) -> Path:
    return args.out if args.out is not None else default


# =============================================================================
# Commands
# =============================================================================
def _print_summary(summary) -> None:
    for horizon in summary.horizons:
        se = f" +- {horizon.expected_se:.4g}" if horizon.expected_se is not None else ""
        print(
            f"T={horizon.T:<8d} expected regret {horizon.expected_mean:.6g}{se}  "
            f"realized {horizon.realized_mean:.6g}  best arm {horizon.best_arm}  (R={horizon.replications})"
        )


def cmd_run(args: argparse.Namespace, registry: LearnerRegistry) -> int:
    config = validate_config(_experiment_data(args))
    out_dir = _out_dir(args, settings.output_dir)
    result = run_experiment(config, out_dir, registry, threads=args.threads)
    _print_summary(result.summary)
    print(f"Results written to {out_dir}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, registry: LearnerRegistry) -> int:
    if args.trials < MIN_TECHNICAL_TRIALS:
        raise ConfigError(f"--trials must be at least {MIN_TECHNICAL_TRIALS}", trials=args.trials)
    if args.trajectory_rounds < 64:
        raise ConfigError("--trajectory-rounds must be at least 64", rounds=args.trajectory_rounds)
    out_dir = _out_dir(args, settings.output_dir / "verify")
    reports = run_verification(trials=args.trials, seed=args.seed, trajectory_rounds=args.trajectory_rounds)
    failed = []
    for report in reports:
        write_report(report, out_dir)
        status = "ok" if report.passed else "FAILED"
        print(f"{report.lemma_id:<32s} {report.trials:>9d} trials  {report.violations:>6d} violations  {status}")
        if not report.passed:
            failed.append(report.lemma_id)
    print(f"Reports written to {out_dir}")
    if failed:
        logger.error("[verify] Violations in: %s", ", ".join(failed))
        return EXIT_VERIFY
    return EXIT_OK


def _sweep_value(param: str, raw: str) -> int | float:
    try:
        return float(raw) if param == "q_target" else int(raw)
    except ValueError as e:
        raise ConfigError(f"bad {param} value", value=raw) from e


def cmd_sweep(args: argparse.Namespace, registry: LearnerRegistry) -> int:
    base = _experiment_data(args)
    out_dir = _out_dir(args, settings.output_dir)
    values = [_sweep_value(args.param, raw.strip()) for raw in args.values.split(",") if raw.strip()]
    if not values:
        raise ConfigError("--values is empty")

    rows = []
    for value in values:
        data = copy.deepcopy(base)
        if args.param == "horizon":
            data["horizons"] = [value]
        else:
            data.setdefault("env", {})[args.param] = value
        config = validate_config(data)
        result = run_experiment(config, out_dir / f"{args.param}-{value}", registry, threads=args.threads)
        for horizon in result.summary.horizons:
            rows.append(
                {
                    "param": args.param,
                    "value": value,
                    "T": horizon.T,
                    "replications": horizon.replications,
                    "realized_mean": horizon.realized_mean,
                    "expected_mean": horizon.expected_mean,
                    "expected_se": horizon.expected_se,
                    "S_mean": horizon.S_mean,
                    "Q_mean": horizon.Q_mean,
                    "Lstar_mean": horizon.Lstar_mean,
                }
            )
        logger.info("[sweep] %s=%s done", args.param, value)

    out_dir.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(out_dir / "sweep.csv", index=False, float_format=FLOAT_FORMAT)
    print(pd.DataFrame(rows)[["value", "T", "expected_mean", "S_mean", "Q_mean"]].to_string(index=False))
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, registry: LearnerRegistry) -> int:
    out_dir = _out_dir(args, settings.output_dir / "replay")
    if args.checkpoint is not None:
        runner = ReplicationRunner.from_checkpoint(read_checkpoint(args.checkpoint), registry, out_dir)
    else:
        config = read_summary(args.summary).config
        if args.horizon is None or args.horizon not in config.horizons:
            raise ConfigError("--T must be one of the summary's horizons", horizons=config.horizons)
        if not 0 <= args.replication < config.replications:
            raise ConfigError("--replication outside the summary's range", replications=config.replications)
        config = config.model_copy(update={"capture": "full"})
        runner = ReplicationRunner(config, args.horizon, args.replication, registry, out_dir)

    result = runner.run()
    write_results([result.row], out_dir / "results.csv")
    if result.logs:
        write_roundlog(result.logs, roundlog_path(out_dir, runner.horizon, runner.replication))
    print(
        f"T={result.row.T} r={result.row.replication}: expected regret {result.row.expected_regret:.6g}, "
        f"realized {result.row.realized_regret:.6g}"
    )
    return EXIT_OK


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "sweep": cmd_sweep, "replay": cmd_replay}


def configure_logging() -> None:
    logging.basicConfig(level=settings.log_level.upper(), format="%(levelname)-7s %(message)s")


def main(argv: list[str] | None = None, registry: LearnerRegistry | None = None) -> int:
    registry = registry or default_registry()
    args = build_parser(registry).parse_args(argv)
    try:
        return COMMANDS[args.command](args, registry)
    except ConfigError as e:
        logger.error("[cli] %s", e.get_error_summary())
        return EXIT_CONFIG
