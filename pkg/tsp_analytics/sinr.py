"""
Closed-form UL, CL and PD SINR of matched-filter processing with imperfect
CSI. Every SINR has the structure

    ((M + 1) beta^2 + eps beta) / (M C + (beta + eps) varsigma)

where C collects the coherent (pilot contamination) interference and
varsigma the non-coherent interference and noise.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from tsp_core.exceptions import TargetUnachievableError
from tsp_network.channel import ChannelDrop
from tsp_network.topology import NetworkTopology
from tsp_signals.power import PowerAllocation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SinrBreakdown:
    beta: float
    mscee: float
    correlated_gain: float
    varsigma: float
    antennas: int
    correlated_scale: float = 1.0

    @property
    def signal(self) -> float:
        return (self.antennas + 1) * self.beta**2 + self.mscee * self.beta

    @property
    def correlated(self) -> float:
        return self.antennas * self.correlated_gain * self.correlated_scale

    @property
    def uncorrelated(self) -> float:
        return (self.beta + self.mscee) * self.varsigma

    @property
    def sinr(self) -> float:
        return self.signal / (self.correlated + self.uncorrelated)

    @property
    def ceiling(self) -> float:
        """Limit of the SINR as M grows without bound."""
        coherent = self.correlated_gain * self.correlated_scale
        if coherent <= 0:
            return math.inf
        return self.beta**2 / coherent

    def with_antennas(self, antennas: int) -> "SinrBreakdown":
        return replace(self, antennas=antennas)

    def with_mscee(self, mscee: float) -> "SinrBreakdown":
        return replace(self, mscee=mscee)


def sinr_ul(
    drop: ChannelDrop,
    topology: NetworkTopology,
    powers: PowerAllocation,
    mscee: float,
    l: int,
    k: int,
    antennas: int,
) -> SinrBreakdown:
    beta = drop.beta[l, :, :]
    rho_d, rho_p = powers.ul_data, powers.ul_pilot
    b = float(beta[l, k])
    correlated = sum(
        rho_d[j, k] / rho_d[l, k] * rho_p[j, k] / rho_p[l, k] * beta[j, k] ** 2
        for j in sorted(topology.group_members(l))
        if j != l
    )
    varsigma = (
        float(np.sum(rho_d * beta)) / rho_d[l, k] - b + powers.config.noise_ul / rho_d[l, k]
    )
    return SinrBreakdown(
        beta=b, mscee=mscee, correlated_gain=float(correlated), varsigma=float(varsigma), antennas=antennas
    )


def _dl_correlated(
    drop: ChannelDrop,
    topology: NetworkTopology,
    powers: PowerAllocation,
    mscee_of: Mapping[int, float],
    l: int,
    k: int,
) -> float:
    rho_dl, rho_p = powers.dl_data, powers.ul_pilot
    own = drop.beta[l, l, k] + mscee_of[l]
    total = 0.0
    for j in sorted(topology.group_members(l)):
        if j == l:
            continue
        scaling = own / (drop.beta[j, j, k] + mscee_of[j])
        total += (
            scaling
            * rho_dl[j, k] / rho_dl[l, k]
            * rho_p[l, k] / rho_p[j, k]
            * drop.beta[j, l, k] ** 2
        )
    return float(total)


def sinr_pd(
    drop: ChannelDrop,
    topology: NetworkTopology,
    powers: PowerAllocation,
    mscee_of: Mapping[int, float],
    l: int,
    k: int,
    antennas: int,
) -> SinrBreakdown:
    """
    DL SINR while every BS transmits. ``mscee_of[j]`` is the error of MS k
    of cell j at its own BS, for every cell of the target's group.
    """
    rho = powers.dl_data[l, k]
    b = float(drop.beta[l, l, k])
    cell_power = powers.dl_data.sum(axis=1)
    varsigma = float(np.dot(cell_power, drop.beta[:, l, k])) / rho - b + powers.config.noise_pd / rho
    return SinrBreakdown(
        beta=b,
        mscee=mscee_of[l],
        correlated_gain=_dl_correlated(drop, topology, powers, mscee_of, l, k),
        varsigma=varsigma,
        antennas=antennas,
    )


def sinr_cl(
    drop: ChannelDrop,
    topology: NetworkTopology,
    powers: PowerAllocation,
    mscee_of: Mapping[int, float],
    l: int,
    k: int,
    antennas: int,
    pilot_group: Optional[int],
) -> SinrBreakdown:
    """
    DL SINR while the cells of ``pilot_group`` send UL pilots instead of DL
    data; their MSs leak into the target MS. Without a pilot group this is
    the PD expression with the CL noise variance.
    """
    if pilot_group is None:
        pd = sinr_pd(drop, topology, powers, mscee_of, l, k, antennas)
        noise_shift = (powers.config.noise_cl - powers.config.noise_pd) / powers.dl_data[l, k]
        return replace(pd, varsigma=pd.varsigma + noise_shift)

    rho = powers.dl_data[l, k]
    b = float(drop.beta[l, l, k])
    pilot_cells = topology.groups[pilot_group]
    cell_power = powers.dl_data.sum(axis=1)
    transmitting = sum(
        cell_power[j] * drop.beta[j, l, k] for j in range(topology.num_cells) if j not in pilot_cells
    )
    mu = drop.mu[l][k]
    leakage = sum(float(np.dot(powers.ul_pilot[j], mu[j])) for j in sorted(pilot_cells))
    varsigma = (transmitting + leakage + powers.config.noise_cl) / rho - b
    return SinrBreakdown(
        beta=b,
        mscee=mscee_of[l],
        correlated_gain=_dl_correlated(drop, topology, powers, mscee_of, l, k),
        varsigma=float(varsigma),
        antennas=antennas,
    )


@dataclass(frozen=True)
class AntennaRequirement:
    m_t: float
    lower_bound: float


def antennas_required(target: float, breakdown: SinrBreakdown) -> AntennaRequirement:
    """
    Smallest (real-valued) M at which ``breakdown`` reaches the linear SINR
    ``target``, and the bound obtained when pilot contamination is ignored.
    """
    b, eps, s = breakdown.beta, breakdown.mscee, breakdown.varsigma
    coherent = breakdown.correlated_gain * breakdown.correlated_scale
    denominator = b**2 - target * coherent
    if denominator <= 0:
        raise TargetUnachievableError(target, breakdown.ceiling)
    m_t = (target * (b + eps) * s - b * (b + eps)) / denominator
    lower_bound = (b + eps) / b * (target * s / b - 1)
    return AntennaRequirement(m_t=m_t, lower_bound=lower_bound)


def pooled_breakdown(breakdowns: Sequence[SinrBreakdown]) -> SinrBreakdown:
    """Breakdown whose terms are the population means of the given ones."""
    n = len(breakdowns)
    mean = lambda name: math.fsum(getattr(b, name) for b in breakdowns) / n  # noqa: E731
    return SinrBreakdown(
        beta=mean("beta"),
        mscee=mean("mscee"),
        correlated_gain=mean("correlated_gain"),
        varsigma=mean("varsigma"),
        antennas=breakdowns[0].antennas,
        correlated_scale=mean("correlated_scale"),
    )


def population_sinr(breakdowns: Sequence[SinrBreakdown]) -> float:
    """Closed form evaluated on the population means of its terms."""
    if not breakdowns:
        return math.nan
    return pooled_breakdown(breakdowns).sinr
