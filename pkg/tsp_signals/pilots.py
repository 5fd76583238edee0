from dataclasses import dataclass

import numpy as np
from scipy.linalg import dft

from tsp_core.exceptions import ConfigError
from tsp_core.util import complex_gaussian


@dataclass(frozen=True, eq=False)
class PilotBook:
    sequences: np.ndarray
    """(K, F_c * tau_P) pilot rows with psi_k psi_k'^H = F_c tau_P delta_kk'."""

    @property
    def users(self) -> int:
        return self.sequences.shape[0]

    @property
    def length(self) -> int:
        return self.sequences.shape[1]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.sequences[k]


def make_pilot_book(users: int, length: int) -> PilotBook:
    if users > length:
        raise ConfigError(f"{users} orthogonal pilots don't fit in {length} symbols")
    return PilotBook(sequences=dft(length)[:users])


def orthogonal_bs_pilots(antennas: int) -> np.ndarray:
    """(M, M) BS pilot matrix with (1/M) P P^H = I."""
    return dft(antennas)


def gaussian_bs_pilots(antennas: int, length: int, rng: np.random.Generator) -> np.ndarray:
    """(M, tau_BS) i.i.d. CN(0, 1) sensing pilots shared by all BSs."""
    return complex_gaussian(rng, (antennas, length))


def draw_symbols(rng: np.random.Generator, shape, kind: str = "gaussian") -> np.ndarray:
    """Unit average power data symbols."""
    if kind == "gaussian":
        return complex_gaussian(rng, shape)
    elif kind == "qpsk":
        bits = rng.integers(0, 2, size=tuple(shape) + (2,))
        return ((2 * bits[..., 0] - 1) + 1j * (2 * bits[..., 1] - 1)) / np.sqrt(2)
    raise ConfigError(f"unknown symbol alphabet: {kind}")
