"""
The ``simulate`` command: runs named or file-defined experiments and writes
their results, validates configuration files and lists the presets.
"""

import logging
import os
import time
from datetime import datetime, timezone
from typing import Optional

import click

from tsp_core.exceptions import ConfigError, SimulationError, UnknownPresetError
from tsp_core.log import setup_logging

logger = logging.getLogger(__name__)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages")
@click.option("--log-file", is_flag=True, help="Also log to a file in the log directory")
def main(verbose: bool = False, log_file: bool = False):
    path = setup_logging("simulate", verbose=verbose, log_stderr=True, log_file=log_file)
    if path:
        logger.debug(f"Logging to {path}")


def _load_spec(experiment: str):
    from tsp_experiments.presets import PRESETS, preset, spec_from_file

    if experiment in PRESETS:
        return preset(experiment)
    if os.path.isfile(experiment):
        return spec_from_file(experiment)
    raise UnknownPresetError(
        f"{experiment} is neither a preset ({', '.join(PRESETS)}) nor a file"
    )


@main.command()
@click.argument("experiment", type=str)
@click.option("--seed", type=int, help="Master seed of the random streams")
@click.option("--drops", type=click.IntRange(min=1), help="Number of drops per grid point")
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes")
@click.option("--out-dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--analytics-only", is_flag=True, help="Skip the signal-level simulation")
@click.option("--signal-level", is_flag=True, help="Force the signal-level simulation")
@click.option("--realizations", type=click.IntRange(min=1), help="Small-scale realizations per drop")
def run(
    experiment: str,
    seed: Optional[int] = None,
    drops: Optional[int] = None,
    workers: Optional[int] = None,
    out_dir: Optional[str] = None,
    analytics_only: bool = False,
    signal_level: bool = False,
    realizations: Optional[int] = None,
):
    """Run a preset (see `simulate presets`) or an experiment file."""
    from tsp_core.dirs import get_runs_dir
    from tsp_experiments.runner import run_experiment

    from .output import build_manifest, emit_plotdata, write_csvs, write_manifest

    if analytics_only and signal_level:
        raise click.UsageError("--analytics-only and --signal-level exclude each other")

    try:
        spec = _load_spec(experiment).replace(seed=seed, drops=drops, workers=workers)
        out_dir = out_dir or get_runs_dir(spec.name)
        started = datetime.now(timezone.utc)
        t0 = time.perf_counter()
        report = run_experiment(spec, analytics_only, signal_level, realizations)
        wall_time = time.perf_counter() - t0

        paths = write_csvs(report, out_dir)
        emit_plotdata(report, os.path.join(out_dir, "plotdata"))
        write_manifest(build_manifest(spec, report, started, wall_time, analytics_only), out_dir)
    except SimulationError as e:
        logger.debug("run failed", exc_info=True)
        click.echo(f"error: {e}", err=True)
        raise SystemExit(1) from e

    click.echo(f"Wrote {len(paths)} metric files to {out_dir} in {wall_time:.1f}s")


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def validate(path: str):
    """Check a scenario or experiment file, listing every problem."""
    from tsp_core.config import load_experiment

    try:
        load_experiment(path)
    except ConfigError as e:
        click.echo(str(e), err=True)
        raise SystemExit(1) from e
    click.echo(f"{path}: ok")


@main.command()
def presets():
    """List the named experiments."""
    from tsp_experiments.presets import PRESETS

    for name, spec in PRESETS.items():
        click.echo(f"{name:8} {spec.sweep:32} {spec.description}")


@main.command()
def directories():
    # Print all directories
    from tsp_core.dirs import get_data_dir, get_log_dir, get_runs_dir

    print("Directory paths used")
    print(" - data:   ", get_data_dir(None))
    print(" - runs:   ", get_runs_dir(None))
    print(" - logs:   ", get_log_dir(None))


if __name__ == "__main__":
    main()
