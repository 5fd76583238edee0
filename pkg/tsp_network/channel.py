"""
Large-scale fading and small-scale channel samplers.

Notation for the gain arrays of a :class:`ChannelDrop`:

- ``beta[l, j, k]``: MS k of cell j to BS l
- ``alpha[l, d]``: BS d to BS l (the diagonal is unused and stored as 0)
- ``mu[l][k1, j, k]``: MS k of cell j to MS k1 of cell l, for the cells of
  ``mu`` only (the MSs whose downlink is analysed)
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.linalg import toeplitz

from tsp_core.exceptions import ChannelError
from tsp_core.util import complex_gaussian

from .topology import MsPlacement, NetworkTopology

logger = logging.getLogger(__name__)

EIGEN_CLIP = 1e-12

StreamFactory = Callable[..., np.random.Generator]


@dataclass(frozen=True)
class LargeScaleParams:
    pathloss_exponent: float = 3.8
    shadowing_db: float = 8.0
    ricean_factor: float = 10.0
    correlation: float = 0.8

    def __post_init__(self):
        if self.pathloss_exponent <= 2:
            raise ChannelError(f"path-loss exponent must exceed 2, got {self.pathloss_exponent}")
        if not 0 <= self.correlation <= 1:
            raise ChannelError(f"correlation must be in [0, 1], got {self.correlation}")
        if self.ricean_factor < 0 or self.shadowing_db < 0:
            raise ChannelError("Ricean factor and shadowing spread must be non-negative")


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    antennas: int
    kappa: float
    matrix: np.ndarray
    sqrt: np.ndarray


def pathloss_gain(d, exponent: float, shadow_db=0.0):
    """``d ** -exponent * 10 ** (shadow_db / 10)``; works on scalars and arrays."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0):
        raise ChannelError("link distance must be positive")
    gain = d_arr ** (-exponent) * 10 ** (np.asarray(shadow_db, dtype=float) / 10)
    return float(gain) if np.ndim(gain) == 0 else gain


def sample_shadowing(rng: np.random.Generator, sigma_db: float, shape) -> np.ndarray:
    return sigma_db * rng.standard_normal(shape)


@lru_cache(maxsize=32)
def loyka_matrix(antennas: int, kappa: float) -> CorrelationMatrix:
    if antennas < 1 or not 0 <= kappa <= 1:
        raise ChannelError(f"invalid correlation matrix: M={antennas}, kappa={kappa}")
    R = toeplitz(float(kappa) ** np.arange(antennas))
    eigval, eigvec = np.linalg.eigh(R)
    eigval = np.where(eigval < EIGEN_CLIP, 0.0, eigval)
    sqrt = (eigvec * np.sqrt(eigval)) @ eigvec.T
    sqrt = (sqrt + sqrt.T) / 2
    sqrt.setflags(write=False)
    R.setflags(write=False)
    return CorrelationMatrix(antennas=antennas, kappa=float(kappa), matrix=R, sqrt=sqrt)


def sample_ms_bs(beta, antennas: int, rng: np.random.Generator) -> np.ndarray:
    """``sqrt(beta) * h`` with ``h ~ CN(0, I)``; ``beta`` may be an array of links."""
    beta = np.asarray(beta, dtype=float)
    h = complex_gaussian(rng, beta.shape + (antennas,))
    return np.sqrt(beta)[..., None] * h


def steering_vector(antennas: int, angle: float) -> np.ndarray:
    """Half-wavelength ULA response; ``angle`` is measured from the array axis."""
    return np.exp(1j * np.pi * np.arange(antennas) * np.cos(angle))


def los_component(topology: NetworkTopology, l: int, d: int, antennas: int) -> np.ndarray:
    """
    Rank-one line-of-sight matrix from BS d to BS l. All arrays lie along the
    x axis, so broadside is 90 degrees and every entry has unit modulus.
    """
    if l == d:
        raise ChannelError("line-of-sight component needs two distinct BSs")
    dx, dy = topology.centers[d] - topology.centers[l]
    arrival = math.atan2(dy, dx)
    departure = math.atan2(-dy, -dx)
    return np.outer(steering_vector(antennas, arrival), steering_vector(antennas, departure).conj())


def sample_bs_bs(
    alpha: float,
    ricean_factor: float,
    correlation: CorrelationMatrix,
    los: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    if math.isinf(ricean_factor):
        return np.sqrt(alpha) * los
    M = correlation.antennas
    scattered = correlation.sqrt @ complex_gaussian(rng, (M, M)) @ correlation.sqrt
    los_weight = math.sqrt(ricean_factor / (1 + ricean_factor))
    nlos_weight = math.sqrt(1 / (1 + ricean_factor))
    return np.sqrt(alpha) * (los_weight * los + nlos_weight * scattered)


def sample_ms_ms(mu, rng: np.random.Generator):
    mu = np.asarray(mu, dtype=float)
    gamma = complex_gaussian(rng, mu.shape)
    value = np.sqrt(mu) * gamma
    return complex(value) if value.ndim == 0 else value


@dataclass(frozen=True, eq=False)
class ChannelDrop:
    """One large-scale realization: positions, shadowing and all gains."""

    placement: MsPlacement
    beta: np.ndarray
    alpha: np.ndarray
    mu: Dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def num_cells(self) -> int:
        return self.beta.shape[0]

    @property
    def users(self) -> int:
        return self.beta.shape[2]

    def serving_gains(self) -> np.ndarray:
        """``beta[l, l, k]`` as an (L, K) array."""
        idx = np.arange(self.num_cells)
        return self.beta[idx, idx, :]


def sample_large_scale(
    topology: NetworkTopology,
    placement: MsPlacement,
    params: LargeScaleParams,
    rng_for: StreamFactory,
    mu_cells: Iterable[int] = (),
) -> ChannelDrop:
    """
    Draws the shadowing of every link and evaluates the large-scale gains.
    ``rng_for(link_class, *link_id)`` must return an independent stream per
    link class. MS-MS distances are floored at the protection radius.
    """
    L = topology.num_cells
    K = placement.positions.shape[1]
    eta, sigma = params.pathloss_exponent, params.shadowing_db

    # (BS l, cell j, user k)
    delta = placement.positions[None, :, :, :] - topology.centers[:, None, None, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    beta = pathloss_gain(dist, eta, sample_shadowing(rng_for("shadow-ms-bs"), sigma, (L, L, K)))

    bs_delta = topology.centers[:, None, :] - topology.centers[None, :, :]
    bs_dist = np.hypot(bs_delta[..., 0], bs_delta[..., 1])
    np.fill_diagonal(bs_dist, 1.0)
    alpha = pathloss_gain(bs_dist, eta, sample_shadowing(rng_for("shadow-bs-bs"), sigma, (L, L)))
    np.fill_diagonal(alpha, 0.0)

    mu = {}
    for l in sorted(set(mu_cells)):
        diff = placement.positions[None, None, :, :, :] - placement.positions[l][:, None, None, None, :]
        d = np.hypot(diff[..., 0], diff[..., 1]).reshape(K, L, K)
        d = np.maximum(d, topology.protection_radius)
        shadow = sample_shadowing(rng_for("shadow-ms-ms", l), sigma, (K, L, K))
        gains = pathloss_gain(d, eta, shadow)
        gains[np.arange(K), l, np.arange(K)] = 0.0
        mu[l] = gains

    return ChannelDrop(placement=placement, beta=beta, alpha=alpha, mu=mu)


class LazyChannels:
    """
    Small-scale channels of one drop, drawn on first use from per-link
    streams. BS-BS fading is fixed for the whole drop; MS-BS and MS-MS fading
    depend on the small-scale realization index.

    ``rng_for(link_class, *link_id)`` returns the stream of one link.
    """

    def __init__(
        self,
        drop: ChannelDrop,
        topology: NetworkTopology,
        params: LargeScaleParams,
        antennas: int,
        rng_for: StreamFactory,
        bs_cache: Optional[Dict[Tuple[int, int], np.ndarray]] = None,
    ) -> None:
        self.drop = drop
        self.topology = topology
        self.params = params
        self.antennas = antennas
        self.rng_for = rng_for
        self._bs_bs = bs_cache if bs_cache is not None else {}
        self._ms_bs: Dict[Tuple[int, int, int, str], np.ndarray] = {}
        self._ms_ms: Dict[Tuple[int, int, int], np.ndarray] = {}

    def ms_bs(self, l: int, j: int, realization: int = 0, epoch: str = "current") -> np.ndarray:
        """(K, M) channels of the MSs of cell j at BS l; row k is g_ljk."""
        key = (l, j, realization, epoch)
        if key not in self._ms_bs:
            tag = 0 if epoch == "current" else 1
            rng = self.rng_for("ms-bs", realization, tag, l, j)
            self._ms_bs[key] = sample_ms_bs(self.drop.beta[l, j], self.antennas, rng)
        return self._ms_bs[key]

    def bs_bs(self, l: int, d: int) -> np.ndarray:
        key = (l, d)
        if key not in self._bs_bs:
            R = loyka_matrix(self.antennas, self.params.correlation)
            los = los_component(self.topology, l, d, self.antennas)
            rng = self.rng_for("bs-bs", l, d)
            self._bs_bs[key] = sample_bs_bs(
                float(self.drop.alpha[l, d]), self.params.ricean_factor, R, los, rng
            )
        return self._bs_bs[key]

    def ms_ms(self, l: int, j: int, realization: int = 0) -> np.ndarray:
        """(K, K) scalar links from the MSs of cell j to the MSs of cell l."""
        key = (l, j, realization)
        if key not in self._ms_ms:
            if l not in self.drop.mu:
                raise ChannelError(f"MS-MS gains were not evaluated for cell {l}")
            rng = self.rng_for("ms-ms", realization, l, j)
            self._ms_ms[key] = sample_ms_ms(self.drop.mu[l][:, j, :], rng)
        return self._ms_ms[key]

    def next_realization(self) -> None:
        """Forgets the per-realization draws, keeping the BS-BS channels."""
        self._ms_bs.clear()
        self._ms_ms.clear()
