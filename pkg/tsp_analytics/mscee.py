"""
Closed-form mean-square channel estimation error (MSCEE) of TSP and IC-TSP.

All values are linear powers. ``interference_scale`` multiplies the DL
power of the interfering cells during the pilot window of the target.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np
from scipy.integrate import quad

from tsp_core.exceptions import ConfigError
from tsp_core.util import db_to_linear, linear_to_db
from tsp_network.channel import ChannelDrop, LargeScaleParams
from tsp_network.frame import FrameSchedule
from tsp_network.topology import BsReuseSchedule, NetworkTopology, hexagon_grid
from tsp_signals.power import PowerAllocation, PowerConfig

logger = logging.getLogger(__name__)

BS_ESTIMATORS = ("ls", "lmmse", "cs", "cs-data")


@dataclass(frozen=True)
class MsceeBreakdown:
    """
    Error terms of one MS. For TSP ``data`` is the whole inter-group data
    term; for IC-TSP it only covers the cells outside the cluster and the
    cancelled cells contribute through the two residual terms.
    """

    beta: float
    pilot: float
    data: float
    noise: float
    data_residual: float = 0.0
    noise_residual: float = 0.0
    scheme: str = "tsp"

    @property
    def data_others(self) -> float:
        return self.data

    @property
    def total(self) -> float:
        return self.pilot + self.data + self.noise + self.data_residual + self.noise_residual

    @property
    def dominance(self) -> float:
        """Share of the inter-group data interference in the total error."""
        total = self.total
        if total == 0:
            return 0.0
        return (self.data + self.data_residual) / total

    @property
    def normalized_db(self) -> float:
        return linear_to_db(self.total / self.beta)

    def scaled(self, **factors: float) -> "MsceeBreakdown":
        return replace(self, **{k: getattr(self, k) * v for k, v in factors.items()})


def lmmse_mscee(beta, mscee):
    """Error power left by scalar Wiener shrinkage of an LS estimate."""
    beta, mscee = np.asarray(beta, dtype=float), np.asarray(mscee, dtype=float)
    value = beta * mscee / (beta + mscee)
    return float(value) if value.ndim == 0 else value


def _pilot_term(drop: ChannelDrop, topology: NetworkTopology, powers: PowerAllocation, l: int, k: int) -> float:
    rho = powers.ul_pilot[l, k]
    return float(
        sum(
            powers.ul_pilot[j, k] / rho * drop.beta[l, j, k]
            for j in sorted(topology.group_members(l))
            if j != l
        )
    )


def _data_scale(schedule: FrameSchedule, powers: PowerAllocation, l: int, k: int, scale: float) -> float:
    """Multiplies ``P_d * alpha`` into the error power after the pilot projection."""
    return scale / (schedule.pilot_length * powers.ul_pilot[l, k])


def mscee_tsp(
    drop: ChannelDrop,
    topology: NetworkTopology,
    schedule: FrameSchedule,
    powers: PowerAllocation,
    l: int,
    k: int,
    interference_scale: float = 1.0,
) -> MsceeBreakdown:
    c = _data_scale(schedule, powers, l, k, interference_scale)
    cell_power = powers.dl_data.sum(axis=1)
    data = c * float(sum(cell_power[d] * drop.alpha[l, d] for d in topology.interferers(l)))
    return MsceeBreakdown(
        beta=float(drop.beta[l, l, k]),
        pilot=_pilot_term(drop, topology, powers, l, k),
        data=data,
        noise=powers.config.noise_pilot / (schedule.pilot_length * powers.ul_pilot[l, k]),
        scheme="tsp",
    )


def bs_error_power(
    drop: ChannelDrop, bs_schedule: BsReuseSchedule, powers: PowerAllocation, l: int, d: int, antennas: int
):
    """Per-entry co-slot and noise error powers of the LS estimate of G_ld."""
    co_slot = float(sum(drop.alpha[l, b] for b in bs_schedule.co_slot(d) if b != l))
    noise = powers.config.noise_bs / (antennas * powers.bs_pilot)
    return co_slot, noise


def mscee_ic_tsp(
    drop: ChannelDrop,
    topology: NetworkTopology,
    schedule: FrameSchedule,
    powers: PowerAllocation,
    cluster: Iterable[int],
    bs_schedule: Optional[BsReuseSchedule],
    l: int,
    k: int,
    antennas: int,
    bs_estimator: str = "ls",
    accuracy: float = 0.99,
    interference_scale: float = 1.0,
) -> MsceeBreakdown:
    """
    IC-TSP error of MS k of cell l. ``bs_estimator`` selects the BS-BS
    estimator the cancellation relies on; ``"cs"`` and ``"cs-data"`` add
    the energy outside the ``accuracy`` support to the LS residual.
    """
    if bs_estimator not in BS_ESTIMATORS:
        raise ValueError(f"unknown BS-BS estimator: {bs_estimator}")
    group = topology.group_members(l)
    cancelled = sorted(d for d in cluster if d != l and d not in group)
    if cancelled and bs_schedule is None:
        raise ValueError("cancelling interference needs the BS reuse schedule")

    base = mscee_tsp(drop, topology, schedule, powers, l, k, interference_scale)
    c = _data_scale(schedule, powers, l, k, interference_scale)
    cell_power = powers.dl_data.sum(axis=1)
    data_others = c * float(
        sum(cell_power[d] * drop.alpha[l, d] for d in topology.interferers(l) if d not in cancelled)
    )

    data_residual, noise_residual = 0.0, 0.0
    for d in cancelled:
        co_slot, noise = bs_error_power(drop, bs_schedule, powers, l, d, antennas)
        alpha = float(drop.alpha[l, d])
        if bs_estimator == "lmmse":
            gain = alpha / (alpha + co_slot + noise)
            data_part = gain**2 * co_slot + (1 - gain) ** 2 * alpha
            noise_part = gain**2 * noise
        else:
            data_part, noise_part = co_slot, noise
            if bs_estimator in ("cs", "cs-data"):
                data_part += (1 - accuracy) * alpha
        data_residual += c * cell_power[d] * data_part
        noise_residual += c * cell_power[d] * noise_part

    return MsceeBreakdown(
        beta=base.beta,
        pilot=base.pilot,
        data=data_others,
        noise=base.noise,
        data_residual=data_residual,
        noise_residual=noise_residual,
        scheme="ic-tsp",
    )


def shadowing_mean(shadowing_db: float) -> float:
    """E[10 ** (X / 10)] for X ~ N(0, shadowing_db^2)."""
    sigma = shadowing_db * math.log(10) / 10
    return math.exp(sigma**2 / 2)


def mean_pathloss(r_c: float, r_d: float, exponent: float) -> float:
    """E[d ** -exponent] over MSs placed uniformly in their cell, d measured to the serving BS."""
    if r_d <= 0:
        raise ConfigError("layout.protection_radius: the mean path gain needs a positive radius")
    apothem = r_c * math.sqrt(3) / 2

    def wedge(theta: float) -> float:
        edge = apothem / math.cos(theta)
        if exponent == 2:
            return math.log(edge / r_d)
        return (r_d ** (2 - exponent) - edge ** (2 - exponent)) / (exponent - 2)

    # 12 mirror-image wedges between a flat side and the next corner
    integral, _ = quad(wedge, 0.0, math.pi / 6)
    area = 3 * math.sqrt(3) / 2 * r_c**2 - math.pi * r_d**2
    return 12 * integral / area


def expected_tsp_terms(
    topology: NetworkTopology,
    schedule: FrameSchedule,
    power: PowerConfig,
    params: LargeScaleParams,
    l: int = 0,
) -> MsceeBreakdown:
    """
    Population means of the TSP error terms of cell ``l`` and of the target
    gain, averaged over MS placement and shadowing, for uniform power.
    """
    eta = params.pathloss_exponent
    shadow = shadowing_mean(params.shadowing_db)
    r_c, r_d = topology.cell_radius, topology.protection_radius
    c = 1 / (schedule.pilot_length * power.ms_pilot)

    grid = hexagon_grid(r_c, r_d)
    pilot = 0.0
    for j in sorted(topology.group_members(l) - {l}):
        offset = topology.centers[j] - topology.centers[l]
        pilot += float(np.mean(np.hypot(*(grid + offset).T) ** -eta))
    data = math.fsum(topology.distance(l, d) ** -eta for d in topology.interferers(l))

    return MsceeBreakdown(
        beta=shadow * mean_pathloss(r_c, r_d, eta),
        pilot=shadow * pilot,
        data=c * power.bs_data * shadow * data,
        noise=c * power.noise_pilot,
        scheme="tsp",
    )


def interference_scale_for(expected: MsceeBreakdown, target_db: float) -> float:
    """
    Factor on the interferers' DL power that puts the population-mean
    normalized MSCEE of ``expected`` at ``target_db``.
    """
    floor = expected.pilot + expected.noise
    wanted = db_to_linear(target_db) * expected.beta
    if expected.data <= 0 or wanted <= floor:
        raise ConfigError(
            f"analysis.mscee_target_db: {target_db} dB is out of reach, pilot contamination"
            f" and noise alone give {linear_to_db(floor / expected.beta):.1f} dB"
        )
    return (wanted - floor) / expected.data
