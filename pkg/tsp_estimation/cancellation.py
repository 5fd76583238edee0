import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, Iterable, Mapping, Optional, Tuple

import numpy as np

from tsp_core.exceptions import EstimationError
from tsp_signals.compose import ReceivedPilotBlock, precoded_data

from .ls import project_pilot
from .results import BsBsEstimate, EstimationResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IciEstimate:
    """
    Reconstructed inter-group interference of one pilot window.
    ``noise_parts[d]`` is the part of the reconstruction error of cell d
    caused by BS-pilot noise, when the BS-BS estimate kept it separated.
    """

    total: np.ndarray
    per_cell: Dict[int, np.ndarray] = field(default_factory=dict)
    noise_parts: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def cancelled(self) -> Tuple[int, ...]:
        return tuple(sorted(self.per_cell))


def cancelled_cells(cell: int, cluster: Iterable[int], group: AbstractSet[int]) -> Tuple[int, ...]:
    return tuple(sorted(d for d in cluster if d != cell and d not in group))


def estimate_ici(
    cell: int,
    estimates: Mapping[int, BsBsEstimate],
    precoders: Mapping[int, np.ndarray],
    symbols: Mapping[int, np.ndarray],
    dl_powers: np.ndarray,
    cluster: Iterable[int],
    group: AbstractSet[int],
    shape: Tuple[int, int],
    interference_scale: float = 1.0,
) -> IciEstimate:
    """
    Sum over the cluster cells outside the target group of the estimated
    BS-BS channel times the DL data that cell transmits, which the
    cooperating BSs share.
    """
    total = np.zeros(shape, dtype=complex)
    per_cell, noise_parts = {}, {}
    for d in cancelled_cells(cell, cluster, group):
        if d not in estimates:
            raise EstimationError(f"no BS-BS estimate of cell {d} at BS {cell}")
        transmitted = precoded_data(precoders[d], interference_scale * dl_powers[d], symbols[d])
        est = estimates[d]
        per_cell[d] = est.estimate @ transmitted
        total = total + per_cell[d]
        if "noise" in est.terms:
            noise_parts[d] = -est.terms["noise"] @ transmitted
    return IciEstimate(total=total, per_cell=per_cell, noise_parts=noise_parts)


def ic_tsp_estimate(
    block: ReceivedPilotBlock,
    ici: IciEstimate,
    psi: np.ndarray,
    rho: float,
    channel: Optional[np.ndarray] = None,
) -> EstimationResult:
    """
    LS estimation on the pilot block after subtracting the reconstructed
    interference. The error splits into the co-group pilot term, the data
    of cells outside the cluster, the reconstruction residual of cancelled
    cells (BS-pilot noise part kept apart when known) and receiver noise.
    """
    project = lambda x: project_pilot(x, psi, rho)  # noqa: E731
    M = block.y.shape[0]
    zero = np.zeros(M, dtype=complex)

    cancelled = set(ici.per_cell)
    residual = sum(
        (block.inter_group[d] - ici.per_cell[d] for d in sorted(cancelled)),
        np.zeros_like(block.y),
    )
    noise_residual = sum(
        (project(ici.noise_parts[d]) for d in sorted(ici.noise_parts)), zero
    )

    terms = {}
    if channel is not None:
        terms["self"] = project(block.target) - channel
    terms["pilot"] = sum((project(c) for c in block.intra_group.values()), zero)
    terms["data_others"] = sum(
        (project(c) for d, c in block.inter_group.items() if d not in cancelled), zero
    )
    terms["data_residual"] = project(residual) - noise_residual
    terms["noise_residual"] = noise_residual
    terms["noise"] = project(block.noise)
    return EstimationResult(
        estimate=project(block.y - ici.total), channel=channel, terms=terms
    )
