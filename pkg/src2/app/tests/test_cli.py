"""
Tests for the command-line surface and its exit codes.

RUN: pytest src2/app/tests/test_cli.py -v
"""
import argparse
import json

import pandas as pd
import pytest

from app.harness.cli import EXIT_CONFIG, EXIT_OK, build_parser, main, overlay_flags
from app.harness.writers import checkpoint_path, read_results, read_summary, roundlog_path
from app.learners import default_registry


RUN_FLAGS = [
    "--env-kind", "stochastic_gaps",
    "--K", "4",
    "--env-param", "delta_min=0.25",
    "--horizons", "64",
    "--replications", "2",
    "--seed", "5",
]


def parse(*argv: str) -> argparse.Namespace:
    return build_parser(default_registry()).parse_args(list(argv))


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "learner": {"id": "spm-hybrid"},
        "env": {"kind": "sparse_adversarial", "num_arms": 6, "sparsity": 2},
        "horizons": [64],
        "seed": 1,
    }))
    return path


class TestOverlayFlags:
    """File values overridden by flags."""

    def test_flags_override_file(self, config_file):
        args = parse("run", "--config", str(config_file), "--replications", "3", "--env-param", "sparsity=3")
        data = overlay_flags(json.loads(config_file.read_text()), args)
        assert data["replications"] == 3
        assert data["env"] == {"kind": "sparse_adversarial", "num_arms": 6, "sparsity": 3}

    def test_new_env_kind_drops_old_fields(self, config_file):
        args = parse("run", "--env-kind", "stochastic_gaps", "--env-param", "delta_min=0.1")
        data = overlay_flags(json.loads(config_file.read_text()), args)
        assert data["env"] == {"kind": "stochastic_gaps", "num_arms": 6, "delta_min": 0.1}

    def test_env_param_values_parse_as_json(self):
        args = parse("run", "--env-param", "gaps=[0, 0.1]", "--env-param", "distribution=uniform")
        assert overlay_flags({}, args)["env"] == {"gaps": [0, 0.1], "distribution": "uniform"}

    def test_file_left_untouched(self, config_file):
        data = json.loads(config_file.read_text())
        overlay_flags(data, parse("run", "--K", "9"))
        assert data["env"]["num_arms"] == 6


class TestRunCommand:
    def test_run_from_flags(self, tmp_path):
        assert main(["run", *RUN_FLAGS, "--out", str(tmp_path)]) == EXIT_OK
        assert len(read_results(tmp_path / "results.csv")) == 2
        assert read_summary(tmp_path / "summary.json").config.env.kind == "stochastic_gaps"

    def test_run_from_file(self, config_file, tmp_path):
        assert main(["run", "--config", str(config_file), "--out", str(tmp_path)]) == EXIT_OK
        assert read_results(tmp_path / "results.csv")["env"].tolist() == ["sparse_adversarial"]

    def test_incompatible_learner(self, config_file, tmp_path):
        code = main(["run", "--config", str(config_file), "--learner", "exp3", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert not (tmp_path / "results.csv").exists()

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG

    def test_bad_env_param(self, tmp_path):
        assert main(["run", *RUN_FLAGS, "--env-param", "novalue", "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_invalid_config(self, tmp_path):
        assert main(["run", *RUN_FLAGS, "--replications", "0", "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_missing_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestVerifyCommand:
    def test_too_few_trials(self, tmp_path):
        assert main(["verify", "--trials", "10", "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_too_few_trajectory_rounds(self, tmp_path):
        assert main(["verify", "--trajectory-rounds", "10", "--out", str(tmp_path)]) == EXIT_CONFIG


class TestSweepCommand:
    def test_horizon_sweep(self, tmp_path):
        code = main(["sweep", *RUN_FLAGS, "--param", "horizon", "--values", "64,128", "--out", str(tmp_path)])
        assert code == EXIT_OK
        frame = pd.read_csv(tmp_path / "sweep.csv")
        assert frame["T"].tolist() == [64, 128]
        assert (tmp_path / "horizon-64" / "results.csv").exists()

    def test_bad_value(self, tmp_path):
        code = main(["sweep", *RUN_FLAGS, "--param", "sparsity", "--values", "two", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG


class TestReplayCommand:
    def test_replay_from_summary(self, tmp_path):
        main(["run", *RUN_FLAGS, "--out", str(tmp_path / "run")])
        code = main([
            "replay", "--summary", str(tmp_path / "run" / "summary.json"),
            "--T", "64", "--replication", "1", "--out", str(tmp_path / "replay"),
        ])
        assert code == EXIT_OK
        original = read_results(tmp_path / "run" / "results.csv").iloc[[1]].reset_index(drop=True)
        replayed = read_results(tmp_path / "replay" / "results.csv")
        pd.testing.assert_frame_equal(original, replayed)
        assert len(pd.read_csv(roundlog_path(tmp_path / "replay", 64, 1))) == 64

    def test_replay_unknown_horizon(self, tmp_path):
        main(["run", *RUN_FLAGS, "--out", str(tmp_path)])
        assert main(["replay", "--summary", str(tmp_path / "summary.json"), "--T", "99"]) == EXIT_CONFIG

    def test_replay_from_checkpoint(self, tmp_path):
        main(["run", *RUN_FLAGS, "--checkpoint-every", "40", "--out", str(tmp_path / "run")])
        checkpoint = checkpoint_path(tmp_path / "run", 64, 0)
        assert checkpoint.exists()
        code = main(["replay", "--checkpoint", str(checkpoint), "--out", str(tmp_path / "resumed")])
        assert code == EXIT_OK
        original = read_results(tmp_path / "run" / "results.csv").iloc[[0]].reset_index(drop=True)
        pd.testing.assert_frame_equal(original, read_results(tmp_path / "resumed" / "results.csv"))
