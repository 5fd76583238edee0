import math
from typing import Union

import numpy as np

from .exceptions import ConfigError

Number = Union[int, float]


def dbm_to_watt(dbm: Number) -> float:
    return 10 ** ((dbm - 30) / 10)


def db_to_linear(db: Number) -> float:
    return 10 ** (db / 10)


def linear_to_db(value: Number) -> float:
    if value <= 0:
        return -math.inf
    return 10 * math.log10(value)


def noise_variance(
    psd_dbm_hz: float,
    bandwidth_hz: float,
    subcarrier_spacing_hz: float,
    scaling: str = "subcarrier",
) -> float:
    """Noise power (W) per received sample for the chosen scaling convention."""
    psd = dbm_to_watt(psd_dbm_hz)
    if scaling == "subcarrier":
        return psd * subcarrier_spacing_hz
    elif scaling == "band":
        return psd * bandwidth_hz
    raise ConfigError(f"radio.noise_scaling: unknown noise scaling {scaling!r}")


def complex_gaussian(
    rng: np.random.Generator, shape, variance: float = 1.0
) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples CN(0, variance)."""
    scale = np.sqrt(variance / 2)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
