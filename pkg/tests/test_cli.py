import csv
import json
import os

import pytest
from click.testing import CliRunner

from tsp_cli.__main__ import main

from .utils import SMALL_TOML

EXPERIMENT = SMALL_TOML + """
[experiment]
name = "tiny"
sweep = "layout.groups"
grid = [1, 3]
drops = 2
"""


@pytest.fixture
def experiment_file(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(EXPERIMENT)
    return str(path)


def test_presets():
    result = CliRunner().invoke(main, ["presets"])
    assert result.exit_code == 0
    for name in ("table2", "fig2", "fig10"):
        assert name in result.output


def test_validate(tmp_path, experiment_file):
    runner = CliRunner()
    result = runner.invoke(main, ["validate", experiment_file])
    assert result.exit_code == 0
    assert "ok" in result.output

    bad = tmp_path / "bad.toml"
    bad.write_text("[layout]\ngroups = 5\nplanets = 2\n")
    result = runner.invoke(main, ["validate", str(bad)])
    assert result.exit_code == 1
    assert "layout.planets" in result.output


def test_run(tmp_path, experiment_file):
    out_dir = str(tmp_path / "out")
    result = CliRunner().invoke(
        main, ["run", experiment_file, "--out-dir", out_dir, "--analytics-only", "--seed", "3"]
    )
    assert result.exit_code == 0, result.output

    with open(os.path.join(out_dir, "manifest.json")) as f:
        manifest = json.load(f)
    assert manifest["experiment"] == "tiny"
    assert manifest["seed"] == 3
    assert manifest["drops"] == 2
    assert manifest["analytics_only"] is True
    assert manifest["config"]["layout.cells"] == 19
    assert "mscee.tsp" in manifest["metrics"]

    with open(os.path.join(out_dir, "mscee.tsp.csv")) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["sweep-value", "metric", "mean", "half_width", "n"]
    assert [r[0] for r in rows[1:]] == ["1", "3"]
    assert all(r[1] == "mscee.tsp" and r[4] == "8" for r in rows[1:])

    plotdata = os.listdir(os.path.join(out_dir, "plotdata"))
    assert "tiny_mscee.tsp.dat" in plotdata


def test_run_unknown_experiment(tmp_path):
    result = CliRunner().invoke(main, ["run", "fig99", "--out-dir", str(tmp_path)])
    assert result.exit_code == 1
    assert "fig99" in result.output


def test_run_conflicting_flags(experiment_file):
    result = CliRunner().invoke(main, ["run", experiment_file, "--analytics-only", "--signal-level"])
    assert result.exit_code == 2


def test_directories():
    result = CliRunner().invoke(main, ["directories"])
    assert result.exit_code == 0
    assert "runs" in result.output


def test_log_file_path():
    from datetime import datetime

    from tsp_core.log import log_file_path

    path = log_file_path("simulate", now=datetime(2024, 1, 5, 0, 21, 39, 123))
    assert path.endswith("simulate_2024-01-05T00-21-39.log")


def test_csvs_dont_depend_on_workers(tmp_path, experiment_file):
    outputs = {}
    for workers in (1, 4):
        out_dir = tmp_path / f"workers-{workers}"
        result = CliRunner().invoke(
            main,
            ["run", experiment_file, "--out-dir", str(out_dir), "--analytics-only",
             "--drops", "4", "--workers", str(workers)],
        )
        assert result.exit_code == 0, result.output
        outputs[workers] = {p.name: p.read_bytes() for p in out_dir.glob("*.csv")}
    assert outputs[1]
    assert outputs[1] == outputs[4]
