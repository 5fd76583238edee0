"""
Named experiments. Each one sweeps a single configuration key over a grid,
for one or more series of extra overrides.
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

from tsp_core.config import default_config, load_experiment
from tsp_core.exceptions import ConfigError, UnknownPresetError
from tsp_core.models import ScenarioConfig

logger = logging.getLogger(__name__)

DEFAULT_DROPS = 1000
# signal-level series stop at the default sim.signal_max_antennas
ZF_MAX_ANTENNAS = 256
ANTENNA_GRID = (128, 256, 512, 1024, 2048, 4096)
# population-mean normalized MSCEE, dB
MSCEE_TARGETS = tuple(float(x) for x in range(-20, 11, 5))


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    sweep: str
    grid: Tuple[Any, ...]
    overrides: Dict[str, Any] = field(default_factory=dict)
    series: Dict[str, Dict[str, Any]] = field(default_factory=lambda: {"": {}})
    """Series name -> overrides applied on top of ``overrides``."""
    series_grids: Dict[str, Tuple[Any, ...]] = field(default_factory=dict)
    """Series name -> the values of ``grid`` that series covers; the others cover all of it."""
    metrics: Tuple[str, ...] = ()
    """Metric-name prefixes to report; empty reports everything."""
    drops: int = DEFAULT_DROPS
    seed: int = 0
    workers: int = 1
    cdf: bool = False
    description: str = ""

    def __post_init__(self):
        errors = []
        if not self.grid:
            errors.append("sweep grid is empty")
        if self.drops < 1:
            errors.append(f"drops must be at least 1, got {self.drops}")
        if self.workers < 1:
            errors.append(f"workers must be at least 1, got {self.workers}")
        if not self.series:
            errors.append("at least one series is needed")
        unknown = sorted(set(self.series_grids) - set(self.series))
        if unknown:
            errors.append(f"grids for unknown series: {unknown}")
        if any(not grid for grid in self.series_grids.values()):
            errors.append("a series grid is empty")
        if self.sweep not in ScenarioConfig.keys():
            errors.append(f"unknown sweep key: {self.sweep}")
        if errors:
            raise ConfigError(f"invalid experiment {self.name}", errors)

    @property
    def scenario(self) -> ScenarioConfig:
        """Configuration shared by every point of the sweep."""
        return default_config().override(self.overrides)

    def grid_for(self, series: str = "") -> Tuple[Any, ...]:
        if series not in self.series_grids:
            return self.grid
        return tuple(v for v in self.grid if v in self.series_grids[series])

    def config_for(self, value: Any, series: str = "") -> ScenarioConfig:
        return self.scenario.override({**self.series[series], self.sweep: value})

    def wants(self, metric: str) -> bool:
        return not self.metrics or any(metric.startswith(m) for m in self.metrics)

    def replace(self, **changes) -> "ExperimentSpec":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


def _t_c(*multiples: int) -> Tuple[float, ...]:
    return tuple(float(185 * m) for m in multiples)


def _fig7_series() -> Dict[str, Dict[str, Any]]:
    series = {}
    for groups in (3, 7):
        for method in ("ls", "lmmse", "cs"):
            series[f"g{groups}-{method}"] = {"layout.groups": groups, "ic.bs_estimator": method}
    return series


PRESETS = {
    "table2": ExperimentSpec(
        name="table2",
        description="Normalized MSCEE of TSP and its data-interference share over the group number",
        sweep="layout.groups",
        grid=(1, 3, 4, 7, 9, 12),
        series={"ls": {}, "lmmse": {"estimation.estimator": "lmmse"}},
        metrics=("mscee.tsp", "dominance.tsp", "sim.mscee.tsp"),
    ),
    "fig2": ExperimentSpec(
        name="fig2",
        description="CDF of the data-interference share of the MSCEE for several shadowing spreads",
        sweep="channel.shadowing_db",
        grid=(4.0, 6.0, 8.0),
        metrics=("dominance.tsp",),
        cdf=True,
    ),
    "fig4": ExperimentSpec(
        name="fig4",
        description="UL, CL and PD SINR of TSP against the normalized MSCEE",
        sweep="analysis.mscee_target_db",
        grid=MSCEE_TARGETS,
        overrides={"analysis.interference": "target"},
        series={"M128": {"array.antennas": 128}, "M1024": {"array.antennas": 1024}},
        metrics=("mscee.tsp", "sinr.tsp", "sim.mscee.tsp", "sim.sinr.tsp"),
    ),
    "fig5": ExperimentSpec(
        name="fig5",
        description="UL SINR of TSP with MF or ZF detection and uniform or path-loss power",
        sweep="analysis.mscee_target_db",
        grid=MSCEE_TARGETS,
        overrides={"analysis.interference": "target"},
        series={
            "mf": {},
            "zf": {"estimation.precoder": "zf", "sim.signal_level": True},
            "mf-pathloss": {"power.policy": "pathloss"},
        },
        metrics=("mscee.tsp", "sinr.tsp.ul", "sim.mscee.tsp", "sim.sinr.tsp.ul"),
    ),
    "fig6": ExperimentSpec(
        name="fig6",
        description="BS antennas needed for a target UL SINR against the normalized MSCEE",
        sweep="analysis.imposed_mscee_db",
        grid=tuple(float(x) for x in range(-20, 21, 5)),
        series={"target10": {"analysis.target_sinr_db": 10.0}, "target5": {"analysis.target_sinr_db": 5.0}},
        metrics=("mt",),
    ),
    "fig7": ExperimentSpec(
        name="fig7",
        description="Normalized MSCEE of TSP and IC-TSP against the number of cancelled cells",
        sweep="ic.main_cells",
        grid=(6, 18, 36),
        overrides={"layout.cells": 61, "array.antennas": 128},
        series=_fig7_series(),
        metrics=("mscee.tsp", "mscee.ic", "sim.mscee"),
    ),
    "fig8": ExperimentSpec(
        name="fig8",
        description="UL spectral efficiency against the BS-BS coherence time",
        sweep="frame.bs_coherence_symbols",
        grid=_t_c(5, 10, 20, 50, 100, 200, 500, 1000, 2000),
        series={"M128": {"array.antennas": 128}, "M1024": {"array.antennas": 1024}},
        metrics=("se.ul", "se.gain", "tmin"),
    ),
    "fig9": ExperimentSpec(
        name="fig9",
        description=(
            "UL spectral efficiency against the number of BS antennas, MF and ZF;"
            f" ZF needs the signal-level simulation and stops at M={ZF_MAX_ANTENNAS}"
        ),
        sweep="array.antennas",
        grid=ANTENNA_GRID,
        series={
            "mf-l18": {"ic.main_cells": 18},
            "mf-l36": {"ic.main_cells": 36},
            "zf-l18": {"ic.main_cells": 18, "estimation.precoder": "zf", "sim.signal_level": True},
            "zf-l36": {"ic.main_cells": 36, "estimation.precoder": "zf", "sim.signal_level": True},
        },
        series_grids={
            name: tuple(m for m in ANTENNA_GRID if m <= ZF_MAX_ANTENNAS) for name in ("zf-l18", "zf-l36")
        },
        metrics=("se.ul", "se.gain", "sim.se.ul"),
    ),
    "fig10": ExperimentSpec(
        name="fig10",
        description="UL spectral efficiency with sectorization and CS-based BS-BS estimation",
        sweep="array.antennas",
        grid=(192, 768, 3072, 12288, 30000),
        series={
            "ls": {},
            "ls-sec": {"array.sectors": 3},
            "cs": {"ic.bs_estimator": "cs"},
            "cs-data": {"ic.bs_estimator": "cs-data"},
            "cs-sec": {"ic.bs_estimator": "cs", "array.sectors": 3},
        },
        metrics=("se.ul", "tau_bs"),
    ),
}


def preset(name: str) -> ExperimentSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPresetError(
            f"unknown experiment: {name} (known: {', '.join(PRESETS)})"
        ) from None


def spec_from_file(path: str) -> ExperimentSpec:
    """
    Experiment from a configuration file. Scenario keys that differ from the
    defaults become overrides; ``experiment.*`` keys set the sweep, or extend
    the named ``experiment.preset``.
    """
    cfg, experiment = load_experiment(path)
    get = lambda key, default=None: experiment.get(f"experiment.{key}", default)  # noqa: E731
    defaults = default_config().to_flat()
    overrides = {k: v for k, v in cfg.to_flat().items() if defaults[k] != v}

    if get("preset") is not None:
        base = preset(get("preset"))
        return base.replace(
            name=get("name", base.name),
            overrides={**base.overrides, **overrides},
            sweep=get("sweep"),
            grid=tuple(get("grid")) if get("grid") is not None else None,
            drops=get("drops"),
            seed=get("seed"),
            workers=get("workers"),
        )

    if get("sweep") is None or get("grid") is None:
        raise ConfigError(f"{path}: experiment.sweep and experiment.grid are required without a preset")
    return ExperimentSpec(
        name=get("name", "custom"),
        sweep=get("sweep"),
        grid=tuple(get("grid")),
        overrides=overrides,
        drops=get("drops", DEFAULT_DROPS),
        seed=get("seed", 0),
        workers=get("workers", 1),
    )
