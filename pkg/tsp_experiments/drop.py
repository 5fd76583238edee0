"""
One drop: a large-scale realization (MS positions and shadowing) and every
analytical per-MS metric evaluated on it, plus the empirical ones when the
signal-level simulation is enabled.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from tsp_analytics.efficiency import spectral_efficiency
from tsp_analytics.mscee import MsceeBreakdown, lmmse_mscee, mscee_ic_tsp, mscee_tsp
from tsp_analytics.sectorization import sectorize
from tsp_analytics.sinr import SinrBreakdown, sinr_cl, sinr_pd, sinr_ul
from tsp_core.decorators import drop_context
from tsp_core.exceptions import ScheduleError
from tsp_core.util import db_to_linear
from tsp_estimation.bsbs import sparsify
from tsp_estimation.cancellation import cancelled_cells
from tsp_network.channel import ChannelDrop, LazyChannels, sample_large_scale
from tsp_network.frame import resource_ratio_ic, resource_ratio_tsp
from tsp_network.topology import drop_users
from tsp_signals.power import PowerAllocation

from .rng import drop_streams
from .scenario import Scenario

logger = logging.getLogger(__name__)

SCHEMES = ("tsp", "ic")
STAGES = ("ul", "cl", "pd")


@dataclass(frozen=True, eq=False)
class DropRecord:
    """
    Per-MS metric columns of one drop. Analytical columns have one entry per
    target MS; ``sim.*`` columns cover the MSs of the centre cell only.
    """

    drop_index: int
    columns: Dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __contains__(self, name: str) -> bool:
        return name in self.columns


class DropAnalytics:
    """Memoized closed-form breakdowns of one drop."""

    def __init__(self, scenario: Scenario, drop: ChannelDrop, powers: PowerAllocation) -> None:
        self.scenario = scenario
        self.drop = drop
        self.powers = powers
        self._tsp: Dict[tuple, MsceeBreakdown] = {}
        self._ic: Dict[tuple, MsceeBreakdown] = {}

    def tsp(self, l: int, k: int) -> MsceeBreakdown:
        if (l, k) not in self._tsp:
            sc = self.scenario
            self._tsp[l, k] = mscee_tsp(
                self.drop, sc.topology, sc.frame, self.powers, l, k, sc.interference_scale
            )
        return self._tsp[l, k]

    def ic(self, l: int, k: int) -> MsceeBreakdown:
        if (l, k) not in self._ic:
            sc = self.scenario
            cfg = sc.config
            self._ic[l, k] = mscee_ic_tsp(
                self.drop,
                sc.topology,
                sc.frame,
                self.powers,
                sc.clusters[l],
                sc.bs_schedules[l],
                l,
                k,
                cfg.antennas,
                bs_estimator=cfg.bs_estimator,
                accuracy=cfg.sparsity_accuracy,
                interference_scale=sc.interference_scale,
            )
        return self._ic[l, k]

    def breakdown(self, scheme: str, l: int, k: int) -> MsceeBreakdown:
        return self.tsp(l, k) if scheme == "tsp" else self.ic(l, k)

    def sinrs(self, scheme: str, l: int, k: int) -> Dict[str, SinrBreakdown]:
        sc = self.scenario
        M = sc.antennas
        mscee_of = {
            j: self.breakdown(scheme, j, k).total for j in sc.topology.group_members(l)
        }
        args = (self.drop, sc.topology, self.powers)
        return {
            "ul": sinr_ul(*args, mscee_of[l], l, k, M),
            "cl": sinr_cl(*args, mscee_of, l, k, M, sc.pilot_group(l)),
            "pd": sinr_pd(*args, mscee_of, l, k, M),
        }


def measured_sparsity(scenario: Scenario, channels: LazyChannels) -> int:
    """Largest per-column sparsity over the BS-BS channels the centre cell cancels."""
    topology = scenario.topology
    cells = cancelled_cells(0, scenario.clusters[0], topology.group_members(0))
    accuracy = scenario.config.sparsity_accuracy
    return max((sparsify(channels.bs_bs(0, d), accuracy).column_sparsity for d in cells), default=1)


def _ms_row(
    analytics: DropAnalytics, l: int, k: int, ratios: Dict[str, float]
) -> Dict[str, float]:
    sc = analytics.scenario
    cfg = sc.config
    row: Dict[str, float] = {"beta": float(analytics.drop.beta[l, l, k])}

    sinrs = {}
    for scheme in SCHEMES:
        b = analytics.breakdown(scheme, l, k)
        reported = lmmse_mscee(b.beta, b.total) if cfg.estimator == "lmmse" else b.total
        row[f"{scheme}.mscee"] = reported
        row[f"{scheme}.mscee_ls"] = b.total
        row[f"{scheme}.pilot"] = b.pilot
        row[f"{scheme}.data"] = b.data
        row[f"{scheme}.noise"] = b.noise
        row[f"{scheme}.data_residual"] = b.data_residual
        row[f"{scheme}.noise_residual"] = b.noise_residual
        row[f"{scheme}.dominance"] = b.dominance
        if cfg.precoder != "mf":
            continue
        sinrs[scheme] = analytics.sinrs(scheme, l, k)
        for stage, s in sinrs[scheme].items():
            row[f"{scheme}.{stage}.sinr"] = s.sinr
            row[f"{scheme}.{stage}.correlated_gain"] = s.correlated_gain
            row[f"{scheme}.{stage}.varsigma"] = s.varsigma

    row["imposed.mscee"] = row["beta"] * db_to_linear(cfg.imposed_mscee_db)
    if cfg.precoder != "mf":
        return row

    row["se.ul.tsp"] = spectral_efficiency(sinrs["tsp"]["ul"].sinr, ratios["tsp"])
    row["se.ul.ic"] = spectral_efficiency(sinrs["ic"]["ul"].sinr, ratios["tsp"], ratios["ic"])
    if cfg.sectors > 1:
        for scheme in SCHEMES:
            mscee, ul = sectorize(analytics.breakdown(scheme, l, k), sinrs[scheme]["ul"], cfg.sectors)
            row[f"{scheme}-sec.mscee"] = mscee.total
            row[f"{scheme}-sec.ul.sinr"] = ul.sinr
        row["se.ul.tsp-sec"] = spectral_efficiency(row["tsp-sec.ul.sinr"], ratios["tsp"])
        row["se.ul.ic-sec"] = spectral_efficiency(
            row["ic-sec.ul.sinr"], ratios["tsp"], ratios["ic-sec"]
        )
    return row


def _ic_ratio(scenario: Scenario, tau_bs: int, sectors: int) -> float:
    cfg = scenario.config
    try:
        return resource_ratio_ic(
            scenario.frame,
            cfg.main_cells,
            pilot_length=tau_bs,
            sectors=sectors,
            data_as_pilot=cfg.bs_estimator == "cs-data",
        )
    except ScheduleError as e:
        logger.debug(f"IC-TSP has no resources left: {e}")
        return 0.0


@drop_context
def run_drop(scenario: Scenario, drop_index: int, seed: int) -> DropRecord:
    """Evaluates one drop; the result only depends on (scenario, seed, drop_index)."""
    cfg = scenario.config
    topology = scenario.topology
    rng_for = drop_streams(seed, drop_index)

    placement = drop_users(topology, cfg.users, rng_for("placement"))
    drop = sample_large_scale(topology, placement, scenario.params, rng_for, mu_cells=scenario.targets)
    powers = scenario.power.allocate(drop.serving_gains())

    channels: Optional[LazyChannels] = None
    sparsity = None
    if cfg.bs_estimator in ("cs", "cs-data") and cfg.sparsity_mode == "per-drop":
        if cfg.antennas <= cfg.signal_max_antennas:
            channels = LazyChannels(drop, topology, scenario.params, cfg.antennas, rng_for)
            sparsity = measured_sparsity(scenario, channels)
        else:
            logger.debug(f"M={cfg.antennas} too large to measure sparsity, using the frozen ratio")
    tau_bs = scenario.bs_pilot_length(sparsity)

    ratios = {
        "tsp": resource_ratio_tsp(scenario.frame),
        "ic": _ic_ratio(scenario, tau_bs, 1),
        "ic-sec": _ic_ratio(scenario, tau_bs, cfg.sectors),
    }
    analytics = DropAnalytics(scenario, drop, powers)
    rows: List[Dict[str, float]] = [
        _ms_row(analytics, l, k, ratios) for l in scenario.targets for k in range(cfg.users)
    ]
    columns = {name: np.array([r[name] for r in rows]) for name in rows[0]}
    columns["tau_bs"] = np.full(len(rows), float(tau_bs))

    if scenario.signal_level:
        from .simulate import simulate_drop

        if channels is None:
            channels = LazyChannels(drop, topology, scenario.params, cfg.antennas, rng_for)
        sparsity = sparsity if sparsity is not None else scenario.frozen_sparsity()
        columns.update(
            simulate_drop(scenario, analytics, channels, rng_for, tau_bs, sparsity, ratios)
        )
    return DropRecord(drop_index=drop_index, columns=columns)
