from . import rng
from . import scenario
from . import drop
from . import simulate
from . import aggregate
from . import presets
from . import runner

from .scenario import Scenario
from .drop import DropRecord, run_drop
from .aggregate import (
    Estimate,
    ReportRow,
    CdfCurve,
    MetricsReport,
    dominance_cdf,
)
from .presets import ExperimentSpec, PRESETS, preset, spec_from_file
from .runner import run_drops, run_experiment

__all__ = [
    # Modules
    "rng",
    "scenario",
    "drop",
    "simulate",
    "aggregate",
    "presets",
    "runner",
    # Classes
    "Scenario",
    "DropRecord",
    "Estimate",
    "ReportRow",
    "CdfCurve",
    "MetricsReport",
    "ExperimentSpec",
    # Functions
    "run_drop",
    "dominance_cdf",
    "preset",
    "spec_from_file",
    "run_drops",
    "run_experiment",
    # Data
    "PRESETS",
]
