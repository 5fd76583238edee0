"""Files written by ``simulate run``: CSVs, the run manifest and plot data."""

import csv
import json
import logging
import os
import platform
from datetime import datetime
from typing import Any, Dict, List

import numpy as np
import scipy

from tsp_core.__about__ import __version__
from tsp_core.exceptions import SimulationError
from tsp_core.schema import schema_errors
from tsp_experiments.aggregate import MetricsReport, ReportRow
from tsp_experiments.presets import ExperimentSpec

logger = logging.getLogger(__name__)

CSV_HEADER = ["sweep-value", "metric", "mean", "half_width", "n"]


def _label(row: ReportRow) -> str:
    return f"{row.series}:{row.metric}" if row.series else row.metric


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-._" else "_" for c in text) or "default"


def write_csvs(report: MetricsReport, out_dir: str) -> List[str]:
    """One CSV per metric, rows in series then grid order."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for metric in report.metric_names():
        path = os.path.join(out_dir, f"{_slug(metric)}.csv")
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in report.rows_for(metric):
                e = row.estimate
                writer.writerow([row.sweep_value, _label(row), repr(e.mean), repr(e.half_width), e.n])
        paths.append(path)
    return paths


def emit_plotdata(report: MetricsReport, out_dir: str) -> List[str]:
    """
    Whitespace-separated columns, one file per (experiment, curve). Metric
    curves hold ``sweep mean half_width n``; CDF curves ``value probability``.
    """
    if report.is_empty():
        logger.warning(f"Nothing to plot for {report.experiment}")
        return []
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    curves: Dict[tuple, List[ReportRow]] = {}
    for row in report.rows:
        curves.setdefault((row.series, row.metric), []).append(row)
    for (series, metric), rows in curves.items():
        name = "_".join(_slug(p) for p in (report.experiment, series, metric) if p)
        path = os.path.join(out_dir, f"{name}.dat")
        with open(path, "w") as f:
            f.write(f"# {report.sweep} mean half_width n\n")
            for row in rows:
                e = row.estimate
                f.write(f"{row.sweep_value} {e.mean!r} {e.half_width!r} {e.n}\n")
        paths.append(path)

    for curve in report.cdfs:
        parts = (report.experiment, curve.series, "cdf", f"{report.sweep}={curve.sweep_value}")
        path = os.path.join(out_dir, "_".join(_slug(p) for p in parts if p) + ".dat")
        np.savetxt(
            path,
            np.column_stack([curve.values, curve.probabilities]),
            header="value probability",
            comments="# ",
        )
        paths.append(path)
    return paths


def build_manifest(
    spec: ExperimentSpec,
    report: MetricsReport,
    started: datetime,
    wall_time: float,
    analytics_only: bool,
) -> Dict[str, Any]:
    config = spec.scenario
    return {
        "experiment": spec.name,
        "started": started.isoformat(),
        "seed": spec.seed,
        "drops": spec.drops,
        "workers": spec.workers,
        "analytics_only": analytics_only,
        "sweep": spec.sweep,
        "grid": list(spec.grid),
        "series": spec.series,
        "noise_scaling": config.noise_scaling,
        "config": config.to_flat(),
        "versions": {
            "tsp-sim": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "wall_time": wall_time,
        "metrics": report.metric_names(),
    }


def write_manifest(manifest: Dict[str, Any], out_dir: str) -> str:
    errors = schema_errors(manifest, "manifest")
    if errors:
        raise SimulationError("invalid run manifest: " + "; ".join(errors))
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
