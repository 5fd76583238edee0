import logging
from dataclasses import dataclass

import numpy as np

from tsp_core.exceptions import ConfigError
from tsp_core.util import dbm_to_watt, noise_variance

logger = logging.getLogger(__name__)

POLICIES = ("uniform", "pathloss")


@dataclass(frozen=True)
class PowerConfig:
    """Transmit power ceilings (W), per-stage noise variances (W) and the policy."""

    ms_pilot: float
    ms_data: float
    bs_data: float
    bs_pilot: float
    noise_pilot: float
    noise_ul: float
    noise_cl: float
    noise_pd: float
    noise_bs: float
    policy: str = "uniform"

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown power policy: {self.policy}")
        powers = (self.ms_pilot, self.ms_data, self.bs_data, self.bs_pilot)
        if min(powers) <= 0:
            raise ConfigError("all transmit powers must be positive")

    @classmethod
    def from_config(cls, cfg) -> "PowerConfig":
        sigma2 = noise_variance(
            cfg.noise_psd_dbm_hz,
            cfg.bandwidth_mhz * 1e6,
            cfg.subcarrier_spacing_khz * 1e3,
            cfg.noise_scaling,
        )
        ms = dbm_to_watt(cfg.ms_power_dbm)
        return cls(
            ms_pilot=ms,
            ms_data=ms,
            bs_data=dbm_to_watt(cfg.bs_power_dbm),
            bs_pilot=dbm_to_watt(cfg.bs_pilot_power_dbm),
            noise_pilot=sigma2,
            noise_ul=sigma2,
            noise_cl=sigma2,
            noise_pd=sigma2,
            noise_bs=sigma2,
            policy=cfg.power_policy,
        )

    def allocate(self, serving: np.ndarray) -> "PowerAllocation":
        """
        Per-MS powers for one drop. ``serving[l, k]`` is the gain of MS k of
        cell l to its own BS.
        """
        L, K = serving.shape
        if self.policy == "uniform":
            ul_pilot = np.full((L, K), self.ms_pilot)
            ul_data = np.full((L, K), self.ms_data)
            dl_data = np.full((L, K), self.bs_data / K)
        else:
            inverse = 1 / serving
            share = inverse / inverse.max(axis=1, keepdims=True)
            ul_pilot = share * self.ms_pilot
            ul_data = share * self.ms_data
            dl_data = inverse / inverse.sum(axis=1, keepdims=True) * self.bs_data
        return PowerAllocation(config=self, ul_pilot=ul_pilot, ul_data=ul_data, dl_data=dl_data)


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    config: PowerConfig
    ul_pilot: np.ndarray
    ul_data: np.ndarray
    dl_data: np.ndarray
    """(L, K) per-MS DL power; each row sums to the BS total."""

    @property
    def bs_data(self) -> float:
        return self.config.bs_data

    @property
    def bs_pilot(self) -> float:
        return self.config.bs_pilot
