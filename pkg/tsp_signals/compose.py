"""
Received baseband blocks of the pilot, uplink-data, downlink and BS-pilot
stages. Every block keeps its components so that estimation errors and
SINRs can be attributed term by term; ``y`` is the sum of
``components()`` taken in that order.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Union

import numpy as np

from tsp_core.exceptions import ScheduleError
from tsp_core.util import complex_gaussian
from tsp_network.channel import LazyChannels
from tsp_network.topology import BsReuseSchedule, NetworkTopology

from .pilots import PilotBook
from .power import PowerAllocation

logger = logging.getLogger(__name__)


def _total(components: List[np.ndarray]) -> np.ndarray:
    return functools.reduce(np.add, components)


@dataclass(frozen=True, eq=False)
class ReceivedPilotBlock:
    cell: int
    target: np.ndarray
    intra_group: Dict[int, np.ndarray]
    inter_group: Dict[int, np.ndarray]
    noise: np.ndarray
    y: np.ndarray = field(repr=False)

    def components(self) -> List[np.ndarray]:
        return (
            [self.target]
            + [self.intra_group[j] for j in sorted(self.intra_group)]
            + [self.inter_group[d] for d in sorted(self.inter_group)]
            + [self.noise]
        )


@dataclass(frozen=True, eq=False)
class UlDataBlock:
    cell: int
    target: np.ndarray
    intra_cell: np.ndarray
    intra_group: np.ndarray
    inter_group: np.ndarray
    noise: np.ndarray
    y: np.ndarray = field(repr=False)

    def components(self) -> List[np.ndarray]:
        return [self.target, self.intra_cell, self.intra_group, self.inter_group, self.noise]


@dataclass(frozen=True, eq=False)
class DlBlock:
    """Signals received by the MSs of one cell in the CL or PD stage."""

    cell: int
    stage: str
    target: np.ndarray
    intra_cell: np.ndarray
    intra_group: np.ndarray
    pilot_leakage: np.ndarray
    inter_group: np.ndarray
    noise: np.ndarray
    y: np.ndarray = field(repr=False)

    def components(self) -> List[np.ndarray]:
        return [
            self.target,
            self.intra_cell,
            self.intra_group,
            self.pilot_leakage,
            self.inter_group,
            self.noise,
        ]


@dataclass(frozen=True, eq=False)
class BsPilotBlock:
    cell: int
    source: int
    target: np.ndarray
    co_slot: Dict[int, np.ndarray]
    noise: np.ndarray
    y: np.ndarray = field(repr=False)

    def components(self) -> List[np.ndarray]:
        return [self.target] + [self.co_slot[b] for b in sorted(self.co_slot)] + [self.noise]


def precoded_data(precoders: np.ndarray, powers: np.ndarray, symbols: np.ndarray) -> np.ndarray:
    """(M, T) transmitted block sum_k sqrt(rho_k) w_k x_k."""
    return (precoders * np.sqrt(powers)[None, :]) @ symbols


def compose_received_pilot(
    cell: int,
    topology: NetworkTopology,
    channels: LazyChannels,
    powers: PowerAllocation,
    pilot_book: PilotBook,
    precoders: Mapping[int, np.ndarray],
    symbols: Mapping[int, np.ndarray],
    rng: np.random.Generator,
    realization: int = 0,
    interference_scale: float = 1.0,
) -> ReceivedPilotBlock:
    """
    Pilot window of the group of ``cell``: its own and co-group pilots plus
    the precoded DL data of every other group, seen through the BS-BS
    channels. ``precoders`` and ``symbols`` are indexed by interfering cell.
    """
    l = cell
    psi = pilot_book.sequences
    group = topology.group_members(l)

    def pilots_from(j: int) -> np.ndarray:
        g = channels.ms_bs(l, j, realization)
        return (g.T * np.sqrt(powers.ul_pilot[j])[None, :]) @ psi

    target = pilots_from(l)
    intra = {j: pilots_from(j) for j in sorted(group) if j != l}
    inter = {}
    for d in topology.interferers(l):
        transmitted = precoded_data(precoders[d], interference_scale * powers.dl_data[d], symbols[d])
        inter[d] = channels.bs_bs(l, d) @ transmitted
    noise = complex_gaussian(rng, target.shape, powers.config.noise_pilot)

    block = ReceivedPilotBlock(
        cell=l, target=target, intra_group=intra, inter_group=inter, noise=noise, y=np.empty(0)
    )
    object.__setattr__(block, "y", _total(block.components()))
    return block


def compose_received_ul_data(
    cell: int,
    topology: NetworkTopology,
    channels: LazyChannels,
    powers: PowerAllocation,
    detectors: np.ndarray,
    symbols: Mapping[int, np.ndarray],
    rng: np.random.Generator,
    realization: int = 0,
) -> UlDataBlock:
    """
    Detector outputs of the MSs of ``cell`` during UL data, one row per MS.
    ``symbols[j]`` is the (K, T) data of cell j; every cell transmits.
    """
    l = cell
    group = topology.group_members(l)
    x_l = symbols[l]
    K, T = x_l.shape
    zero = np.zeros((detectors.shape[0], T), dtype=complex)
    target, intra_cell, intra_group, inter_group = zero, zero, zero, zero

    for j in range(topology.num_cells):
        gains = detectors @ channels.ms_bs(l, j, realization).T
        gains = gains * np.sqrt(powers.ul_data[j])[None, :]
        if j == l:
            diagonal = np.diag(gains)
            target = diagonal[:, None] * x_l
            intra_cell = (gains - np.diag(diagonal)) @ x_l
        elif j in group:
            intra_group = intra_group + gains @ symbols[j]
        else:
            inter_group = inter_group + gains @ symbols[j]

    noise = detectors @ complex_gaussian(
        rng, (detectors.shape[1], T), powers.config.noise_ul
    )
    block = UlDataBlock(
        cell=l,
        target=target,
        intra_cell=intra_cell,
        intra_group=intra_group,
        inter_group=inter_group,
        noise=noise,
        y=np.empty(0),
    )
    object.__setattr__(block, "y", _total(block.components()))
    return block


def compose_received_cl(
    cell: int,
    topology: NetworkTopology,
    channels: LazyChannels,
    powers: PowerAllocation,
    precoders: Mapping[int, np.ndarray],
    symbols: Mapping[int, np.ndarray],
    pilot_book: PilotBook,
    pilot_group: Optional[int],
    rng: np.random.Generator,
    realization: int = 0,
) -> DlBlock:
    """
    DL signals at the MSs of ``cell`` while group ``pilot_group`` sends its
    UL pilots. With ``pilot_group=None`` this is the pure-DL stage: every
    BS transmits, there is no MS-to-MS leakage and the PD noise applies.
    """
    l = cell
    group = topology.group_members(l)
    pilot_cells = topology.groups[pilot_group] if pilot_group is not None else frozenset()
    x_l = symbols[l]
    K, T = x_l.shape
    stage = "cl" if pilot_group is not None else "pd"
    if stage == "cl" and T != pilot_book.length:
        raise ScheduleError(
            f"CL block of {T} symbols doesn't match the {pilot_book.length}-symbol pilots"
        )
    zero = np.zeros((K, T), dtype=complex)
    target, intra_cell, intra_group, inter_group, leakage = zero, zero, zero, zero, zero

    for j in range(topology.num_cells):
        if j in pilot_cells:
            g = channels.ms_ms(l, j, realization) * np.sqrt(powers.ul_pilot[j])[None, :]
            leakage = leakage + g @ pilot_book.sequences[:, :T]
            continue
        # rows are g_jlk^T, the DL channels from BS j to the MSs of cell l
        gains = channels.ms_bs(j, l, realization) @ precoders[j]
        gains = gains * np.sqrt(powers.dl_data[j])[None, :]
        if j == l:
            diagonal = np.diag(gains)
            target = diagonal[:, None] * x_l
            intra_cell = (gains - np.diag(diagonal)) @ x_l
        elif j in group:
            intra_group = intra_group + gains @ symbols[j]
        else:
            inter_group = inter_group + gains @ symbols[j]

    variance = powers.config.noise_cl if stage == "cl" else powers.config.noise_pd
    noise = complex_gaussian(rng, (K, T), variance)
    block = DlBlock(
        cell=l,
        stage=stage,
        target=target,
        intra_cell=intra_cell,
        intra_group=intra_group,
        pilot_leakage=leakage,
        inter_group=inter_group,
        noise=noise,
        y=np.empty(0),
    )
    object.__setattr__(block, "y", _total(block.components()))
    return block


def compose_bs_pilot(
    cell: int,
    source: int,
    schedule: BsReuseSchedule,
    channels: LazyChannels,
    powers: PowerAllocation,
    pilot_matrix: Union[np.ndarray, Mapping[int, np.ndarray]],
    rng: np.random.Generator,
    pilot_power: Optional[float] = None,
) -> BsPilotBlock:
    """
    BS pilots of ``source`` received at BS ``cell``, plus those of every
    other BS in the same slot. ``pilot_matrix`` is either shared (M, tau)
    or a per-BS mapping, as when precoded DL data doubles as the pilot.
    """
    rho = powers.bs_pilot if pilot_power is None else pilot_power

    def pilot_of(b: int) -> np.ndarray:
        if isinstance(pilot_matrix, np.ndarray):
            return pilot_matrix
        return pilot_matrix[b]

    def received(b: int) -> np.ndarray:
        return np.sqrt(rho) * channels.bs_bs(cell, b) @ pilot_of(b)

    target = received(source)
    co_slot = {b: received(b) for b in sorted(schedule.co_slot(source)) if b != cell}
    noise = complex_gaussian(rng, target.shape, powers.config.noise_bs)
    block = BsPilotBlock(
        cell=cell, source=source, target=target, co_slot=co_slot, noise=noise, y=np.empty(0)
    )
    object.__setattr__(block, "y", _total(block.components()))
    return block
