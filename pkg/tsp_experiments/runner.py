import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import List, Optional

from tsp_core.models import ScenarioConfig

from .aggregate import CdfCurve, MetricsReport, ReportRow, aggregate, dominance_cdf
from .drop import DropRecord, run_drop
from .presets import ExperimentSpec
from .scenario import Scenario

logger = logging.getLogger(__name__)


def run_drops(scenario: Scenario, drops: int, seed: int, workers: int = 1) -> List[DropRecord]:
    """Records in drop-index order, whatever the number of workers."""
    if workers <= 1:
        return [run_drop(scenario, i, seed) for i in range(drops)]
    chunksize = max(1, drops // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(
            executor.map(run_drop, repeat(scenario), range(drops), repeat(seed), chunksize=chunksize)
        )


def _resolve(cfg: ScenarioConfig, analytics_only: bool, signal_level: bool) -> ScenarioConfig:
    if analytics_only:
        return cfg.override({"sim.signal_level": False})
    if signal_level:
        return cfg.override(
            {"sim.signal_level": True, "sim.signal_max_antennas": max(cfg.antennas, cfg.signal_max_antennas)}
        )
    return cfg


def run_experiment(
    spec: ExperimentSpec,
    analytics_only: bool = False,
    signal_level: bool = False,
    realizations: Optional[int] = None,
) -> MetricsReport:
    report = MetricsReport(experiment=spec.name, sweep=spec.sweep, rows=[], cdfs=[])
    for series in spec.series:
        for value in spec.grid_for(series):
            cfg = _resolve(spec.config_for(value, series), analytics_only, signal_level)
            if realizations is not None:
                cfg = cfg.override({"sim.realizations": realizations})
            label = f"{series}:" if series else ""
            logger.info(f"{spec.name}: {label}{spec.sweep}={value}, {spec.drops} drops")

            scenario = Scenario.from_config(cfg, spec.seed)
            records = run_drops(scenario, spec.drops, spec.seed, spec.workers)
            for metric, estimate in aggregate(records, scenario).items():
                if spec.wants(metric):
                    report.rows.append(ReportRow(value, series, metric, estimate))
            if spec.cdf:
                values, probabilities = dominance_cdf(records)
                report.cdfs.append(CdfCurve(value, series, values, probabilities))
    return report
