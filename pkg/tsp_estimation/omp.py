"""Orthogonal matching pursuit for complex measurements."""

import logging
from typing import NamedTuple

import numpy as np

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-6


class OmpSolution(NamedTuple):
    coefficients: np.ndarray
    support: np.ndarray
    residual_norm: float
    degenerate: bool


def omp(y: np.ndarray, A: np.ndarray, sparsity: int, tol: float = RESIDUAL_TOL) -> OmpSolution:
    """
    Recovers an at most ``sparsity``-sparse x with ``y = A x``. Atoms are
    picked on normalized columns, ties go to the lowest index. Stops early
    once the residual falls below ``tol * ||y||``. An atom whose refit turns
    rank-deficient is dropped and the solution is marked ``degenerate``.
    """
    n = A.shape[1]
    norms = np.linalg.norm(A, axis=0)
    usable = norms > 0
    normalized = np.zeros_like(A)
    normalized[:, usable] = A[:, usable] / norms[usable]

    x = np.zeros(n, dtype=complex)
    y_norm = np.linalg.norm(y)
    if y_norm == 0 or sparsity <= 0:
        return OmpSolution(x, np.zeros(0, dtype=int), float(y_norm), False)

    support: list = []
    coef = np.zeros(0, dtype=complex)
    residual = y.astype(complex)
    degenerate = False
    for _ in range(min(sparsity, n)):
        scores = np.abs(normalized.conj().T @ residual)
        scores[support] = -1
        atom = int(np.argmax(scores))
        if scores[atom] <= 0:
            break
        candidate = support + [atom]
        sub = A[:, candidate]
        if np.linalg.matrix_rank(sub) < len(candidate):
            degenerate = True
            logger.debug(f"OMP: atom {atom} is linearly dependent on the support, dropped")
            break
        support = candidate
        coef = np.linalg.lstsq(sub, y, rcond=None)[0]
        residual = y - sub @ coef
        if np.linalg.norm(residual) < tol * y_norm:
            break

    x[support] = coef
    return OmpSolution(x, np.asarray(support, dtype=int), float(np.linalg.norm(residual)), degenerate)
