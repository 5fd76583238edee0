import logging
from typing import Any, Dict, Optional

import numpy as np

from tsp_core.config import default_config
from tsp_core.models import ScenarioConfig
from tsp_experiments.drop import DropAnalytics
from tsp_experiments.rng import drop_streams
from tsp_experiments.scenario import Scenario
from tsp_network.channel import LazyChannels, sample_large_scale
from tsp_network.topology import drop_users

logging.basicConfig(level=logging.DEBUG)

# 19 cells in 3 pilot groups, 4 MSs per cell on a single subcarrier
SMALL: Dict[str, Any] = {
    "layout.cells": 19,
    "layout.groups": 3,
    "layout.users": 4,
    "frame.subcarriers": 1,
    "frame.pilot_symbols": 4,
    "array.antennas": 32,
    "ic.main_cells": 6,
}

SMALL_TOML = """
[layout]
cells = 19
groups = 3
users = 4

[frame]
subcarriers = 1
pilot_symbols = 4

[array]
antennas = 32

[ic]
main_cells = 6
"""


def small_config(overrides: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    return default_config().override({**SMALL, **(overrides or {})})


def small_scenario(overrides: Optional[Dict[str, Any]] = None, seed: int = 0) -> Scenario:
    return Scenario.from_config(small_config(overrides), seed)


class SmallDrop:
    """One drop of a scenario with its powers, analytics and lazy channels."""

    def __init__(self, scenario: Scenario, seed: int = 0, drop_index: int = 0):
        cfg = scenario.config
        self.scenario = scenario
        self.rng_for = drop_streams(seed, drop_index)
        placement = drop_users(scenario.topology, cfg.users, self.rng_for("placement"))
        self.drop = sample_large_scale(
            scenario.topology, placement, scenario.params, self.rng_for, mu_cells=scenario.targets
        )
        self.powers = scenario.power.allocate(self.drop.serving_gains())
        self.analytics = DropAnalytics(scenario, self.drop, self.powers)
        self.channels = LazyChannels(
            self.drop, scenario.topology, scenario.params, cfg.antennas, self.rng_for
        )


def db(x: float) -> float:
    return float(10 * np.log10(x))
