import logging
import os
from typing import Any, Dict, List, Optional, Tuple

import tomlkit
from tomlkit.exceptions import ParseError

from .exceptions import ConfigError
from .models import ScenarioConfig
from .schema import schema_errors

logger = logging.getLogger(__name__)

EXPERIMENT_PREFIX = "experiment."
EXPERIMENT_KEYS = {
    "experiment.name",
    "experiment.preset",
    "experiment.sweep",
    "experiment.grid",
    "experiment.drops",
    "experiment.seed",
    "experiment.workers",
}

DEFAULT_CONFIG = """
# Defaults follow the reference parameter table of the studied network.
# Keys may be written as tables or as flat dotted keys (power.bs_dbm = 46).

[layout]
cells = 37                      # hexagonal: 1, 7, 19, 37, 61, ...
groups = 7                      # of the form b^2 + bc + c^2
users = 20                      # must equal frame.subcarriers * frame.pilot_symbols
cell_radius = 500.0             # m
protection_radius = 20.0        # m

[radio]
carrier_ghz = 2.0
bandwidth_mhz = 10.0
subcarrier_spacing_khz = 15.0
noise_psd_dbm_hz = -174.0
noise_scaling = "subcarrier"    # "subcarrier" or "band"

[channel]
ricean_factor = 10.0            # linear, BS-BS links
pathloss_exponent = 3.8
shadowing_db = 8.0
correlation = 0.8               # adjacent-antenna coefficient

[power]
bs_dbm = 46.0
ms_dbm = 23.0
bs_pilot_dbm = 46.0             # not in the reference table: full BS power
policy = "uniform"              # "uniform" or "pathloss"

[frame]
coherence_symbols = 185
pilot_symbols = 4
dl_symbols = 96
ul_symbols = 85
subcarriers = 5
bs_coherence_symbols = 92500.0  # 500 coherence blocks
pilot_group_offset = 1          # group in pilot mode during the CL stage

[ic]
main_cells = 18                 # 3 N (N+1)
bs_estimator = "ls"             # "ls", "lmmse", "cs" or "cs-data"
sparsity_accuracy = 0.99
sparsity_mode = "frozen"        # "frozen" or "per-drop"
sparsity_ratio = 0.0            # per-column sparsity / M, 0 calibrates at M=64

[array]
antennas = 128
sectors = 1

[estimation]
estimator = "ls"                # "ls" or "lmmse"
precoder = "mf"                 # "mf" or "zf"
symbols = "gaussian"            # "gaussian" or "qpsk"

[analysis]
averaging = "center"            # "center" or "all"
interference = "scale"          # "scale" or "target"
interference_scale_db = 0.0     # used when interference = "scale"
mscee_target_db = -10.0         # used when interference = "target"
imposed_mscee_db = 0.0
target_sinr_db = 10.0

[sim]
signal_level = false
realizations = 200
signal_max_antennas = 256
"""


def _merge(a: dict, b: dict, path=None):
    """
    Recursively merges b into a, with b taking precedence.
    """
    if path is None:
        path = []
    for key in b:
        if key in a and isinstance(a[key], dict) and isinstance(b[key], dict):
            _merge(a[key], b[key], path + [str(key)])
        else:
            a[key] = b[key]
    return a


def _flatten(d: dict, prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in d.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, dotted + "."))
        else:
            flat[dotted] = value
    return flat


def _parse(text: str, source: str) -> dict:
    try:
        return tomlkit.parse(text).unwrap()
    except ParseError as e:
        raise ConfigError(
            f"{source}: parse error at line {e.line}, column {e.col}",
            [f"line {e.line}, column {e.col}: {e}"],
        ) from e


def default_config() -> ScenarioConfig:
    return ScenarioConfig.from_flat(_flatten(_parse(DEFAULT_CONFIG, "defaults")))


def validate_config(cfg: ScenarioConfig) -> List[str]:
    """Cross-field checks that a JSON schema can't express."""
    from tsp_network.frame import FrameSchedule, validate
    from tsp_network.topology import valid_group_numbers

    errors = schema_errors(cfg.to_flat(), "scenario")
    if errors:
        return errors
    if cfg.rings < 0:
        errors.append(f"layout.cells: {cfg.cells} is not a hexagonal cell count 1+3n(n+1)")
    if cfg.groups not in valid_group_numbers(cfg.groups):
        errors.append(f"layout.groups: {cfg.groups} is not of the form b^2+bc+c^2")
    if cfg.groups > cfg.cells:
        errors.append(f"layout.groups: {cfg.groups} groups for {cfg.cells} cells")
    if cfg.layers < 0:
        errors.append(f"ic.main_cells: {cfg.main_cells} is not of the form 3N(N+1)")
    elif cfg.main_cells > cfg.cells - 1:
        errors.append(f"ic.main_cells: {cfg.main_cells} exceeds the {cfg.cells - 1} other cells")
    if cfg.antennas % cfg.sectors != 0:
        errors.append(f"array.sectors: {cfg.sectors} does not divide {cfg.antennas} antennas")
    if cfg.protection_radius >= cfg.cell_radius * 3**0.5 / 2:
        errors.append("layout.protection_radius: must be smaller than the hexagon apothem")
    # the BS-pilot stage is sized per drop; an oversized one only zeroes the IC rate
    errors.extend(f"frame: {v}" for v in validate(FrameSchedule.from_config(cfg), superframe=False))
    return errors


def _split_experiment(flat: Dict[str, Any]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    scenario = {k: v for k, v in flat.items() if not k.startswith(EXPERIMENT_PREFIX)}
    experiment = {k: v for k, v in flat.items() if k.startswith(EXPERIMENT_PREFIX)}
    return scenario, experiment


def _load(path: str, allow_experiment: bool) -> Tuple[ScenarioConfig, Dict[str, Any]]:
    if not os.path.isfile(path):
        raise ConfigError(f"{path}: no such file")
    with open(path) as f:
        text = f.read()

    user = _parse(text, path)
    flat_user = _flatten(user)
    flat_user, experiment = _split_experiment(flat_user)

    errors = []
    known = ScenarioConfig.keys()
    errors.extend(f"unknown key: {k}" for k in sorted(flat_user) if k not in known)
    if allow_experiment:
        errors.extend(f"unknown key: {k}" for k in sorted(experiment) if k not in EXPERIMENT_KEYS)
    else:
        errors.extend(f"unknown key: {k}" for k in sorted(experiment))
    if errors:
        raise ConfigError(f"{path}: invalid configuration", errors)

    merged = _flatten(_merge(_parse(DEFAULT_CONFIG, "defaults"), user))
    merged, _ = _split_experiment(merged)
    errors = schema_errors(merged, "scenario")
    if errors:
        raise ConfigError(f"{path}: invalid configuration", errors)

    cfg = ScenarioConfig.from_flat(merged)
    errors = validate_config(cfg)
    if errors:
        raise ConfigError(f"{path}: invalid configuration", errors)
    logger.debug(f"Loaded configuration from {path}")
    return cfg, experiment


def load_config(path: str) -> ScenarioConfig:
    """
    Reads a scenario file. Keys missing from the file take their defaults,
    unknown keys are rejected and every violation is reported at once.
    """
    return _load(path, allow_experiment=False)[0]


def load_experiment(path: str) -> Tuple[ScenarioConfig, Dict[str, Any]]:
    """Like :func:`load_config`, also returning the ``experiment.*`` keys."""
    return _load(path, allow_experiment=True)


def dumps_config(cfg: ScenarioConfig, experiment: Optional[Dict[str, Any]] = None) -> str:
    lines = []
    section = None
    items = list(cfg.to_flat().items()) + sorted((experiment or {}).items())
    for key, value in items:
        head = key.split(".", 1)[0]
        if section is not None and head != section:
            lines.append("")
        section = head
        lines.append(f"{key} = {tomlkit.item(value).as_string()}")
    return "\n".join(lines) + "\n"


def save_config(cfg: ScenarioConfig, path: str) -> None:
    text = dumps_config(cfg)
    # Check that the rendered config parses before writing
    assert _parse(text, path)
    with open(path, "w") as f:
        f.write(text)
