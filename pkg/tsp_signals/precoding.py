"""
Precoders and detectors built from channel estimates. Estimates of one cell
are stored row-wise as a (K, M) array; precoders are returned column-wise
as (M, K) so that BS d transmits ``W @ x``.
"""

import logging
from typing import NamedTuple

import numpy as np

from tsp_core.exceptions import EstimationError

logger = logging.getLogger(__name__)

DIAGONAL_LOADING = 1e-10


class ZfPrecoders(NamedTuple):
    weights: np.ndarray
    regularized: bool


def mf_precoder(g_hat: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(g_hat)
    if norm == 0:
        raise EstimationError("matched filter of a zero estimate")
    return np.conj(g_hat) / norm


def mf_precoders(estimates: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(estimates, axis=1)
    if np.any(norms == 0):
        raise EstimationError("matched filter of a zero estimate")
    return (np.conj(estimates) / norms[:, None]).T


def _zf_gram_inverse(G: np.ndarray):
    K = G.shape[1]
    gram = G.T @ np.conj(G)
    if np.linalg.matrix_rank(G) < K:
        load = DIAGONAL_LOADING * max(np.real(np.trace(gram)) / K, 1.0)
        logger.warning(f"Rank-deficient estimate matrix, loading the diagonal with {load:.3g}")
        return np.linalg.inv(gram + load * np.eye(K)), True
    return np.linalg.inv(gram), False


def zf_precoders(estimates: np.ndarray) -> ZfPrecoders:
    """Unit-norm columns of conj(G) (G^T conj(G))^-1 with G = estimates^T."""
    G = estimates.T
    if G.shape[1] > G.shape[0]:
        raise EstimationError(f"zero-forcing {G.shape[1]} users needs at least as many antennas")
    inverse, regularized = _zf_gram_inverse(G)
    W = np.conj(G) @ inverse
    return ZfPrecoders(weights=W / np.linalg.norm(W, axis=0), regularized=regularized)


def mf_detectors(estimates: np.ndarray) -> np.ndarray:
    """(K, M) rows a_k = g_hat_k^H."""
    return np.conj(estimates)


def zf_detectors(estimates: np.ndarray) -> np.ndarray:
    """(K, M) rows of the pseudo-inverse of the cell's estimate matrix."""
    return np.linalg.pinv(estimates.T)


def build_precoders(estimates: np.ndarray, kind: str = "mf") -> np.ndarray:
    if kind == "mf":
        return mf_precoders(estimates)
    elif kind == "zf":
        return zf_precoders(estimates).weights
    raise EstimationError(f"unknown precoder: {kind}")


def build_detectors(estimates: np.ndarray, kind: str = "mf") -> np.ndarray:
    if kind == "mf":
        return mf_detectors(estimates)
    elif kind == "zf":
        return zf_detectors(estimates)
    raise EstimationError(f"unknown detector: {kind}")
