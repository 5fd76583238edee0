import logging
from typing import Optional, Union

import numpy as np

from tsp_signals.compose import ReceivedPilotBlock
from tsp_signals.pilots import PilotBook

from .results import EstimationResult

logger = logging.getLogger(__name__)


def project_pilot(block: np.ndarray, psi: np.ndarray, rho: float) -> np.ndarray:
    return block @ np.conj(psi) / (len(psi) * np.sqrt(rho))


def ls_estimate(
    y: Union[ReceivedPilotBlock, np.ndarray],
    psi: np.ndarray,
    rho: float,
    channel: Optional[np.ndarray] = None,
) -> EstimationResult:
    """
    Correlates the received pilot block with the MS's pilot sequence. When
    ``y`` is a :class:`ReceivedPilotBlock` the same projection is applied to
    every component, giving the pilot, data and noise error terms.
    """
    if not isinstance(y, ReceivedPilotBlock):
        return EstimationResult(estimate=project_pilot(y, psi, rho), channel=channel)

    terms = {}
    if channel is not None:
        terms["self"] = project_pilot(y.target, psi, rho) - channel
    M = y.y.shape[0]
    zero = np.zeros(M, dtype=complex)
    terms["pilot"] = sum((project_pilot(c, psi, rho) for c in y.intra_group.values()), zero)
    terms["data"] = sum((project_pilot(c, psi, rho) for c in y.inter_group.values()), zero)
    terms["noise"] = project_pilot(y.noise, psi, rho)
    return EstimationResult(estimate=project_pilot(y.y, psi, rho), channel=channel, terms=terms)


def ls_estimate_cell(y: np.ndarray, pilot_book: PilotBook, rho: np.ndarray) -> np.ndarray:
    """(K, M) LS estimates of every MS of a cell from one (M, N) block."""
    projected = y @ np.conj(pilot_book.sequences).T / pilot_book.length
    return (projected / np.sqrt(rho)[None, :]).T


def wiener_gain(beta, mscee):
    return np.asarray(beta) / (np.asarray(beta) + np.asarray(mscee))


def lmmse_surrogate(result: EstimationResult, beta: float, mscee: float) -> EstimationResult:
    """
    Scalar Wiener shrinkage of an LS estimate towards zero. ``mscee`` is the
    closed-form LS error power of the MS.
    """
    gain = float(wiener_gain(beta, mscee))
    terms = {name: gain * e for name, e in result.terms.items()}
    if result.channel is not None:
        terms["shrinkage"] = (gain - 1) * result.channel
    return EstimationResult(estimate=gain * result.estimate, channel=result.channel, terms=terms)
