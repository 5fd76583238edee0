"""
Sectorized cells: each of the ``sectors`` sectors is served by M/sectors
antennas and only sees the interferers inside its angular range.
"""

from dataclasses import replace

from tsp_core.exceptions import ConfigError

from .mscee import MsceeBreakdown
from .sinr import SinrBreakdown


def check_sectors(sectors: int, antennas: int) -> None:
    if sectors < 1 or antennas % sectors:
        raise ConfigError(f"{sectors} sectors don't divide {antennas} antennas")


def sectorize_mscee(breakdown: MsceeBreakdown, sectors: int) -> MsceeBreakdown:
    """The co-group pilot term and the IC residual shrink with the interferer population."""
    if sectors == 1:
        return breakdown
    return breakdown.scaled(pilot=1 / sectors, data_residual=1 / sectors)


def sectorize_sinr(breakdown: SinrBreakdown, mscee: float, sectors: int) -> SinrBreakdown:
    if sectors == 1:
        return replace(breakdown, mscee=mscee)
    return replace(breakdown, mscee=mscee, correlated_scale=breakdown.correlated_scale / sectors)


def sectorize(mscee: MsceeBreakdown, sinr: SinrBreakdown, sectors: int):
    """Sectorized counterparts of one MS's MSCEE and SINR breakdowns."""
    check_sectors(sectors, sinr.antennas)
    scaled = sectorize_mscee(mscee, sectors)
    return scaled, sectorize_sinr(sinr, scaled.total, sectors)
