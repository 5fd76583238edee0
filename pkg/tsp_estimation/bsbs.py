"""
BS-BS channel estimation: the orthogonal-pilot LS estimator and the
compressive-sensing estimator that works in the spatial-frequency (DFT)
domain with short Gaussian pilots.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.linalg import dft

from tsp_network.channel import loyka_matrix, sample_bs_bs, steering_vector
from tsp_signals.compose import BsPilotBlock

from .omp import omp
from .results import BsBsEstimate

logger = logging.getLogger(__name__)

ENERGY_TOL = 1e-12


def dft_basis(antennas: int) -> np.ndarray:
    """Unitary DFT matrix A, A A^H = I."""
    return dft(antennas, scale="sqrtn")


def to_spatial_frequency(G: np.ndarray) -> np.ndarray:
    A = dft_basis(G.shape[0])
    return A.conj().T @ G.conj().T @ A


def from_spatial_frequency(G_bar: np.ndarray) -> np.ndarray:
    A = dft_basis(G_bar.shape[0])
    return (A @ G_bar @ A.conj().T).conj().T


def _received(y: Union[BsPilotBlock, np.ndarray]) -> np.ndarray:
    return y.y if isinstance(y, BsPilotBlock) else y


def ls_bs_estimate(
    y: Union[BsPilotBlock, np.ndarray],
    pilots: np.ndarray,
    rho: float,
    channel: Optional[np.ndarray] = None,
) -> BsBsEstimate:
    """
    Correlates the received BS-pilot block with the orthogonal pilot matrix
    P, ``(1/M) P P^H = I``. The co-slot and noise error parts are separated
    when a composed block is given.
    """
    M = pilots.shape[0]

    def project(block: np.ndarray) -> np.ndarray:
        return block @ pilots.conj().T / (M * math.sqrt(rho))

    terms = {}
    if isinstance(y, BsPilotBlock):
        terms["co_slot"] = sum(
            (project(c) for c in y.co_slot.values()), np.zeros((M, M), dtype=complex)
        )
        terms["noise"] = project(y.noise)
    return BsBsEstimate(
        estimate=project(_received(y)),
        channel=channel,
        method="ls",
        pilot_length=pilots.shape[1],
        terms=terms,
    )


def lmmse_bs_estimate(result: BsBsEstimate, alpha: float, error_power: float) -> BsBsEstimate:
    """Per-entry Wiener shrinkage ``alpha / (alpha + e)`` of an LS estimate."""
    gain = alpha / (alpha + error_power)
    terms = {name: gain * e for name, e in result.terms.items()}
    if result.channel is not None:
        terms["shrinkage"] = (gain - 1) * result.channel
    return BsBsEstimate(
        estimate=gain * result.estimate,
        channel=result.channel,
        method="lmmse",
        pilot_length=result.pilot_length,
        terms=terms,
    )


@dataclass(frozen=True, eq=False)
class SparseSupport:
    mask: np.ndarray
    count: int
    column_sparsity: int


def sparsify(G: np.ndarray, accuracy: float) -> SparseSupport:
    """
    Smallest set of largest-magnitude entries of the spatial-frequency
    matrix holding at least ``accuracy`` of its energy. ``column_sparsity``
    is the largest number of support entries in one column.
    """
    if not 0 < accuracy <= 1:
        raise ValueError(f"accuracy must be in (0, 1], got {accuracy}")
    energy = np.abs(to_spatial_frequency(G)) ** 2
    total = energy.sum()
    mask = np.zeros(energy.shape, dtype=bool)
    if total == 0:
        return SparseSupport(mask=mask, count=0, column_sparsity=0)

    flat = energy.ravel()
    order = np.argsort(-flat, kind="stable")
    cumulative = np.cumsum(flat[order])
    count = int(np.searchsorted(cumulative, accuracy * total * (1 - ENERGY_TOL))) + 1
    count = min(count, flat.size)
    mask.ravel()[order[:count]] = True
    return SparseSupport(mask=mask, count=count, column_sparsity=int(mask.sum(axis=0).max()))


def cs_pilot_length(sparsity: int, antennas: int) -> int:
    """``ceil(s * log2(2M / s))``, at least one symbol."""
    if sparsity <= 0:
        return 1
    return max(1, math.ceil(sparsity * math.log2(2 * antennas / sparsity)))


def cs_bs_estimate(
    y: Union[BsPilotBlock, np.ndarray],
    pilots: np.ndarray,
    rho: float,
    sparsity: int,
    channel: Optional[np.ndarray] = None,
) -> BsBsEstimate:
    """
    Column-wise OMP on ``Y^H A = (sqrt(rho) P^H A) G_bar``, followed by the
    inverse DFT transform. ``pilots`` is the (M, tau) sensing matrix, shared
    Gaussian pilots or the precoded DL data of the source BS.
    """
    Y = _received(y)
    M, tau = pilots.shape
    A = dft_basis(M)
    Y_bar = Y.conj().T @ A
    P_bar = math.sqrt(rho) * pilots.conj().T @ A

    G_bar = np.zeros((M, M), dtype=complex)
    flagged = False
    for c in range(M):
        solution = omp(Y_bar[:, c], P_bar, sparsity)
        G_bar[:, c] = solution.coefficients
        flagged = flagged or solution.degenerate
    if flagged:
        logger.warning("OMP dropped linearly dependent atoms during BS-BS estimation")

    return BsBsEstimate(
        estimate=from_spatial_frequency(G_bar),
        channel=channel,
        method="cs",
        pilot_length=tau,
        sparsity=sparsity,
        flagged=flagged,
    )


def calibrate_sparsity_ratio(
    rng: np.random.Generator,
    ricean_factor: float,
    correlation: float,
    accuracy: float,
    antennas: int = 64,
    draws: int = 100,
) -> float:
    """
    Mean per-column sparsity over ``antennas`` of unit-gain BS-BS channels
    with uniformly drawn arrival and departure angles.
    """
    R = loyka_matrix(antennas, correlation)
    ratios = []
    for _ in range(draws):
        arrival, departure = rng.uniform(0, 2 * np.pi, size=2)
        los = np.outer(
            steering_vector(antennas, arrival), steering_vector(antennas, departure).conj()
        )
        G = sample_bs_bs(1.0, ricean_factor, R, los, rng)
        ratios.append(sparsify(G, accuracy).column_sparsity / antennas)
    ratio = math.fsum(ratios) / draws
    logger.info(f"Calibrated BS-BS sparsity ratio s/M = {ratio:.4f} at M={antennas}")
    return ratio
