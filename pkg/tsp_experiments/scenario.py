import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Optional, Tuple

from tsp_analytics.mscee import expected_tsp_terms, interference_scale_for
from tsp_core.config import validate_config
from tsp_core.exceptions import ConfigError
from tsp_core.models import ScenarioConfig
from tsp_core.util import db_to_linear, linear_to_db
from tsp_estimation.bsbs import calibrate_sparsity_ratio, cs_pilot_length
from tsp_network.channel import LargeScaleParams
from tsp_network.frame import FrameSchedule
from tsp_network.topology import (
    BsReuseSchedule,
    NetworkTopology,
    assign_groups,
    bs_reuse_schedule,
    build_hex_layout,
    ic_cluster,
)
from tsp_signals.pilots import PilotBook, make_pilot_book
from tsp_signals.power import PowerConfig

from .rng import stream

logger = logging.getLogger(__name__)

CALIBRATION_ANTENNAS = 64


@lru_cache(maxsize=16)
def calibrated_sparsity_ratio(ricean_factor: float, correlation: float, accuracy: float, seed: int) -> float:
    rng = stream(seed, 0, "calibration")
    return calibrate_sparsity_ratio(
        rng, ricean_factor, correlation, accuracy, antennas=CALIBRATION_ANTENNAS
    )


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything derived once from a :class:`ScenarioConfig` before the drops run."""

    config: ScenarioConfig
    topology: NetworkTopology
    frame: FrameSchedule
    power: PowerConfig
    params: LargeScaleParams
    pilot_book: PilotBook
    targets: Tuple[int, ...]
    clusters: Dict[int, FrozenSet[int]] = field(default_factory=dict)
    bs_schedules: Dict[int, BsReuseSchedule] = field(default_factory=dict)
    sparsity_ratio: float = 0.0
    interference_scale: float = 1.0

    @classmethod
    def from_config(cls, cfg: ScenarioConfig, seed: int = 0) -> "Scenario":
        errors = validate_config(cfg)
        if errors:
            raise ConfigError("Invalid scenario", errors)

        topology = assign_groups(
            build_hex_layout(cfg.rings, cfg.cell_radius, cfg.protection_radius), cfg.groups
        )
        targets = (0,) if cfg.averaging == "center" else tuple(range(topology.num_cells))

        # IC needs the clusters of the targets and of their co-group cells
        needed = sorted({j for l in targets for j in topology.group_members(l)})
        clusters = {l: ic_cluster(topology, l, cfg.layers) for l in needed}
        bs_schedules = {l: bs_reuse_schedule(topology, clusters[l]) for l in needed}

        ratio = cfg.sparsity_ratio
        if cfg.bs_estimator in ("cs", "cs-data") and ratio == 0:
            ratio = calibrated_sparsity_ratio(
                cfg.ricean_factor, cfg.correlation, cfg.sparsity_accuracy, seed
            )

        frame = FrameSchedule.from_config(cfg)
        power = PowerConfig.from_config(cfg)
        params = LargeScaleParams(
            pathloss_exponent=cfg.pathloss_exponent,
            shadowing_db=cfg.shadowing_db,
            ricean_factor=cfg.ricean_factor,
            correlation=cfg.correlation,
        )
        if cfg.interference == "target":
            expected = expected_tsp_terms(topology, frame, power, params)
            scale = interference_scale_for(expected, cfg.mscee_target_db)
            logger.info(
                f"Interference scaled by {linear_to_db(scale):.1f} dB"
                f" for a mean MSCEE of {cfg.mscee_target_db} dB"
            )
        else:
            scale = db_to_linear(cfg.interference_scale_db)

        return cls(
            config=cfg,
            topology=topology,
            frame=frame,
            power=power,
            params=params,
            pilot_book=make_pilot_book(cfg.users, cfg.subcarriers * cfg.pilot_symbols),
            targets=targets,
            clusters=clusters,
            bs_schedules=bs_schedules,
            sparsity_ratio=ratio,
            interference_scale=scale,
        )

    @property
    def antennas(self) -> int:
        return self.config.antennas

    @property
    def signal_level(self) -> bool:
        cfg = self.config
        return cfg.signal_level and cfg.antennas <= cfg.signal_max_antennas

    def pilot_group(self, l: int) -> Optional[int]:
        """Group sending UL pilots during the CL stage of cell ``l``."""
        gamma = self.topology.num_groups
        if gamma == 1:
            return None
        return (self.topology.group_of[l] + self.config.pilot_group_offset) % gamma

    def frozen_sparsity(self) -> int:
        """Per-column sparsity from the calibrated ratio s/M."""
        return max(1, math.ceil(self.sparsity_ratio * self.antennas))

    def bs_pilot_length(self, sparsity: Optional[int] = None) -> int:
        """tau_BS of the configured BS-BS estimator."""
        if self.config.bs_estimator in ("ls", "lmmse"):
            return self.antennas
        s = self.frozen_sparsity() if sparsity is None else sparsity
        return cs_pilot_length(s, self.antennas)
