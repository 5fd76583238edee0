"""
Reduction of drop records into reported statistics.

Means are taken with ``math.fsum`` over the samples in drop order, so the
result doesn't depend on how drops were distributed over workers.
Normalized MSCEEs are ratios of population means, converted to dB last.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from tsp_analytics.efficiency import min_bs_coherence
from tsp_analytics.sinr import SinrBreakdown, antennas_required, pooled_breakdown, population_sinr
from tsp_core.exceptions import InsufficientSamplesError, TargetUnachievableError
from tsp_core.util import db_to_linear, linear_to_db

from .drop import SCHEMES, STAGES, DropRecord

logger = logging.getLogger(__name__)

Z_95 = 1.96
CDF_MIN_SAMPLES = 100
BATCHES = 10
DB_PER_NEPER = 10 / math.log(10)


@dataclass(frozen=True)
class Estimate:
    mean: float
    half_width: float
    n: int


def _column(records: Sequence[DropRecord], name: str) -> np.ndarray:
    return np.concatenate([r[name] for r in records]) if records else np.zeros(0)


def _has(records: Sequence[DropRecord], name: str) -> bool:
    return bool(records) and all(name in r for r in records)


def _mean(values: np.ndarray) -> float:
    return math.fsum(values) / len(values)


def mean_estimate(values: np.ndarray) -> Estimate:
    n = len(values)
    if n == 0:
        return Estimate(math.nan, math.nan, 0)
    mean = _mean(values)
    if n == 1:
        return Estimate(mean, 0.0, 1)
    std = math.sqrt(math.fsum((values - mean) ** 2) / (n - 1))
    return Estimate(mean, Z_95 * std / math.sqrt(n), n)


def ratio_estimate(numerator: np.ndarray, denominator: np.ndarray) -> Estimate:
    """mean(numerator) / mean(denominator), half-width by the delta method."""
    n = len(numerator)
    ratio = math.fsum(numerator) / math.fsum(denominator)
    if n < 2:
        return Estimate(ratio, 0.0, n)
    residual = numerator - ratio * denominator
    std = math.sqrt(math.fsum((residual - _mean(residual)) ** 2) / (n - 1))
    return Estimate(ratio, Z_95 * std / (math.sqrt(n) * _mean(denominator)), n)


def _to_db(e: Estimate) -> Estimate:
    if not e.mean > 0:
        return Estimate(linear_to_db(e.mean) if e.n else math.nan, math.nan, e.n)
    return Estimate(linear_to_db(e.mean), DB_PER_NEPER * e.half_width / e.mean, e.n)


def ratio_db_estimate(numerator: np.ndarray, denominator: np.ndarray) -> Estimate:
    return _to_db(ratio_estimate(numerator, denominator))


def linear_mean_db(values: np.ndarray) -> Estimate:
    """dB of the linear mean."""
    return _to_db(mean_estimate(values))


def db_mean(values: np.ndarray) -> Estimate:
    """Mean of the dB values."""
    return mean_estimate(np.array([linear_to_db(v) for v in values]))


def batch_estimate(records: Sequence[DropRecord], statistic: Callable[[Sequence[DropRecord]], float]) -> Estimate:
    """
    Plug-in statistic of all records; the half-width comes from the spread
    of the statistic over contiguous batches of drops.
    """
    value = statistic(records)
    n = sum(len(next(iter(r.columns.values()))) for r in records)
    batches = min(BATCHES, len(records))
    if batches < 2:
        return Estimate(value, 0.0, n)
    values = [statistic(list(chunk)) for chunk in _split(records, batches)]
    finite = [v for v in values if math.isfinite(v)]
    if len(finite) < 2:
        return Estimate(value, math.nan, n)
    mean = math.fsum(finite) / len(finite)
    std = math.sqrt(math.fsum((v - mean) ** 2 for v in finite) / (len(finite) - 1))
    return Estimate(value, Z_95 * std / math.sqrt(len(finite)), n)


def _split(records: Sequence[DropRecord], parts: int) -> List[Sequence[DropRecord]]:
    bounds = np.linspace(0, len(records), parts + 1).astype(int)
    return [records[a:b] for a, b in zip(bounds[:-1], bounds[1:])]


def population_breakdowns(
    records: Sequence[DropRecord], scheme: str, stage: str, antennas: int, mscee_column: Optional[str] = None
) -> List[SinrBreakdown]:
    beta = _column(records, "beta")
    mscee = _column(records, mscee_column or f"{scheme}.mscee_ls")
    corr = _column(records, f"{scheme}.{stage}.correlated_gain")
    varsigma = _column(records, f"{scheme}.{stage}.varsigma")
    return [
        SinrBreakdown(beta=b, mscee=e, correlated_gain=c, varsigma=v, antennas=antennas)
        for b, e, c, v in zip(beta, mscee, corr, varsigma)
    ]


def _population_db(scheme: str, stage: str, antennas: int) -> Callable[[Sequence[DropRecord]], float]:
    return lambda recs: linear_to_db(population_sinr(population_breakdowns(recs, scheme, stage, antennas)))


def _required_antennas(target_db: float, antennas: int, lower: bool):
    def statistic(recs: Sequence[DropRecord]) -> float:
        breakdowns = population_breakdowns(recs, "tsp", "ul", antennas, "imposed.mscee")
        pooled = pooled_breakdown(breakdowns)
        try:
            requirement = antennas_required(db_to_linear(target_db), pooled)
        except TargetUnachievableError as e:
            logger.warning(str(e))
            return math.inf
        return requirement.lower_bound if lower else requirement.m_t

    return statistic


def _min_coherence(scenario) -> Callable[[Sequence[DropRecord]], float]:
    cfg = scenario.config

    def statistic(recs: Sequence[DropRecord]) -> float:
        tsp = population_sinr(population_breakdowns(recs, "tsp", "ul", cfg.antennas))
        ic = population_sinr(population_breakdowns(recs, "ic", "ul", cfg.antennas))
        tau = math.ceil(_mean(_column(recs, "tau_bs")))
        return min_bs_coherence(
            cfg.subcarriers, tsp, ic, tau, cfg.main_cells,
            data_as_pilot=cfg.bs_estimator == "cs-data",
        )

    return statistic


def aggregate(records: Sequence[DropRecord], scenario) -> Dict[str, Estimate]:
    """All reported metrics of one grid point, keyed by metric name."""
    records = sorted(records, key=lambda r: r.drop_index)
    cfg = scenario.config
    M = cfg.antennas
    metrics: Dict[str, Estimate] = {}
    if not records:
        return metrics
    beta = _column(records, "beta")

    for scheme in SCHEMES + ("tsp-sec", "ic-sec"):
        if _has(records, f"{scheme}.mscee"):
            metrics[f"mscee.{scheme}"] = ratio_db_estimate(_column(records, f"{scheme}.mscee"), beta)
    for scheme in SCHEMES:
        data = _column(records, f"{scheme}.data") + _column(records, f"{scheme}.data_residual")
        total = _column(records, f"{scheme}.mscee_ls")
        metrics[f"dominance.{scheme}"] = ratio_estimate(data, total)

    for scheme in SCHEMES:
        for stage in STAGES:
            name = f"{scheme}.{stage}.sinr"
            if not _has(records, name):
                continue
            values = _column(records, name)
            metrics[f"sinr.{scheme}.{stage}"] = linear_mean_db(values)
            metrics[f"sinr.{scheme}.{stage}.dbmean"] = db_mean(values)
            metrics[f"sinr.{scheme}.{stage}.population"] = batch_estimate(
                records, _population_db(scheme, stage, M)
            )
    for scheme in ("tsp-sec", "ic-sec"):
        if _has(records, f"{scheme}.ul.sinr"):
            metrics[f"sinr.{scheme}.ul"] = linear_mean_db(_column(records, f"{scheme}.ul.sinr"))

    for series in ("tsp", "ic", "tsp-sec", "ic-sec"):
        if _has(records, f"se.ul.{series}"):
            metrics[f"se.ul.{series}"] = mean_estimate(_column(records, f"se.ul.{series}"))
    if _has(records, "se.ul.ic"):
        metrics["se.gain"] = mean_estimate(_column(records, "se.ul.ic") - _column(records, "se.ul.tsp"))
        metrics["mt"] = batch_estimate(records, _required_antennas(cfg.target_sinr_db, M, False))
        metrics["mt.lower"] = batch_estimate(records, _required_antennas(cfg.target_sinr_db, M, True))
        metrics["tmin"] = batch_estimate(records, _min_coherence(scenario))
    metrics["tau_bs"] = mean_estimate(_column(records, "tau_bs"))

    if _has(records, "sim.beta"):
        sim_beta = _column(records, "sim.beta")
        for scheme in SCHEMES:
            metrics[f"sim.mscee.{scheme}"] = ratio_db_estimate(
                _column(records, f"sim.{scheme}.mscee"), sim_beta
            )
        for name in ("tsp.ul", "ic.ul", "tsp.cl", "tsp.pd"):
            values = _column(records, f"sim.{name}.sinr")
            metrics[f"sim.sinr.{name}"] = linear_mean_db(values)
            metrics[f"sim.sinr.{name}.dbmean"] = db_mean(values)
        for series in SCHEMES:
            metrics[f"sim.se.ul.{series}"] = mean_estimate(_column(records, f"sim.se.ul.{series}"))
        if _has(records, "sim.bsbs.error"):
            metrics["sim.bsbs.error"] = mean_estimate(_column(records, "sim.bsbs.error"))
    return metrics


def dominance_cdf(records: Sequence[DropRecord], scheme: str = "tsp") -> Tuple[np.ndarray, np.ndarray]:
    """Empirical CDF of the data-interference share of the MSCEE over MSs and drops."""
    values = np.sort(_column(records, f"{scheme}.dominance"))
    if len(values) < CDF_MIN_SAMPLES:
        raise InsufficientSamplesError(
            f"a CDF needs at least {CDF_MIN_SAMPLES} samples, got {len(values)}"
        )
    return values, np.arange(1, len(values) + 1) / len(values)


@dataclass(frozen=True)
class ReportRow:
    sweep_value: float
    series: str
    metric: str
    estimate: Estimate


@dataclass(frozen=True, eq=False)
class CdfCurve:
    sweep_value: float
    series: str
    values: np.ndarray
    probabilities: np.ndarray


@dataclass
class MetricsReport:
    experiment: str
    sweep: str
    rows: List[ReportRow]
    cdfs: List[CdfCurve]

    def is_empty(self) -> bool:
        return not self.rows and not self.cdfs

    def metric_names(self) -> List[str]:
        return sorted({row.metric for row in self.rows})

    def rows_for(self, metric: str) -> List[ReportRow]:
        return [row for row in self.rows if row.metric == metric]

    def get(self, metric: str, sweep_value, series: str = "") -> Estimate:
        for row in self.rows:
            if row.metric == metric and row.series == series and row.sweep_value == sweep_value:
                return row.estimate
        raise KeyError(f"{series}:{metric} at {self.sweep}={sweep_value}")
