import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict

logger = logging.getLogger(__name__)


def _key(key: str, default: Any, unit: str = "") -> Any:
    return field(default=default, metadata={"key": key, "unit": unit})


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Every parameter of one simulation scenario.

    Each field is addressed in configuration files by its flat dotted key
    (see ``field.metadata["key"]``). Powers are in dBm and converted to watts
    once, by :class:`tsp_signals.power.PowerConfig`.
    """

    # layout
    cells: int = _key("layout.cells", 37, "cells")
    groups: int = _key("layout.groups", 7, "groups")
    users: int = _key("layout.users", 20, "MSs per cell")
    cell_radius: float = _key("layout.cell_radius", 500.0, "m")
    protection_radius: float = _key("layout.protection_radius", 20.0, "m")
    # radio
    carrier_ghz: float = _key("radio.carrier_ghz", 2.0, "GHz")
    bandwidth_mhz: float = _key("radio.bandwidth_mhz", 10.0, "MHz")
    subcarrier_spacing_khz: float = _key("radio.subcarrier_spacing_khz", 15.0, "kHz")
    noise_psd_dbm_hz: float = _key("radio.noise_psd_dbm_hz", -174.0, "dBm/Hz")
    noise_scaling: str = _key("radio.noise_scaling", "subcarrier")
    # channel
    ricean_factor: float = _key("channel.ricean_factor", 10.0, "linear")
    pathloss_exponent: float = _key("channel.pathloss_exponent", 3.8)
    shadowing_db: float = _key("channel.shadowing_db", 8.0, "dB")
    correlation: float = _key("channel.correlation", 0.8)
    # power
    bs_power_dbm: float = _key("power.bs_dbm", 46.0, "dBm")
    ms_power_dbm: float = _key("power.ms_dbm", 23.0, "dBm")
    bs_pilot_power_dbm: float = _key("power.bs_pilot_dbm", 46.0, "dBm")
    power_policy: str = _key("power.policy", "uniform")
    # frame
    coherence_symbols: int = _key("frame.coherence_symbols", 185, "symbols")
    pilot_symbols: int = _key("frame.pilot_symbols", 4, "symbols")
    dl_symbols: int = _key("frame.dl_symbols", 96, "symbols")
    ul_symbols: int = _key("frame.ul_symbols", 85, "symbols")
    subcarriers: int = _key("frame.subcarriers", 5, "subcarriers")
    bs_coherence_symbols: float = _key("frame.bs_coherence_symbols", 92500.0, "symbols")
    pilot_group_offset: int = _key("frame.pilot_group_offset", 1, "groups")
    # interference cancellation
    main_cells: int = _key("ic.main_cells", 18, "cells")
    bs_estimator: str = _key("ic.bs_estimator", "ls")
    sparsity_accuracy: float = _key("ic.sparsity_accuracy", 0.99)
    sparsity_mode: str = _key("ic.sparsity_mode", "frozen")
    sparsity_ratio: float = _key("ic.sparsity_ratio", 0.0)
    # array
    antennas: int = _key("array.antennas", 128, "antennas")
    sectors: int = _key("array.sectors", 1, "sectors")
    # estimation / precoding
    estimator: str = _key("estimation.estimator", "ls")
    precoder: str = _key("estimation.precoder", "mf")
    symbols: str = _key("estimation.symbols", "gaussian")
    # analysis knobs
    averaging: str = _key("analysis.averaging", "center")
    interference: str = _key("analysis.interference", "scale")
    interference_scale_db: float = _key("analysis.interference_scale_db", 0.0, "dB")
    mscee_target_db: float = _key("analysis.mscee_target_db", -10.0, "dB")
    imposed_mscee_db: float = _key("analysis.imposed_mscee_db", 0.0, "dB")
    target_sinr_db: float = _key("analysis.target_sinr_db", 10.0, "dB")
    # signal-level simulation
    signal_level: bool = _key("sim.signal_level", False)
    realizations: int = _key("sim.realizations", 200, "realizations")
    signal_max_antennas: int = _key("sim.signal_max_antennas", 256, "antennas")

    @classmethod
    def keys(cls) -> Dict[str, str]:
        """Maps flat dotted keys to attribute names."""
        return {f.metadata["key"]: f.name for f in dataclasses.fields(cls)}

    @classmethod
    def from_flat(cls, flat: Dict[str, Any]) -> "ScenarioConfig":
        keys = cls.keys()
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in flat.items():
            name = keys[key]
            # TOML integers are accepted for float fields
            if types[name] in (float, "float") and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
            kwargs[name] = value
        return cls(**kwargs)

    def to_flat(self) -> Dict[str, Any]:
        return {f.metadata["key"]: getattr(self, f.name) for f in dataclasses.fields(self)}

    def override(self, overrides: Dict[str, Any]) -> "ScenarioConfig":
        """Returns a copy with the given dotted keys replaced."""
        flat = self.to_flat()
        unknown = sorted(set(overrides) - set(flat))
        if unknown:
            from .exceptions import ConfigError

            raise ConfigError("Unknown configuration keys", [f"unknown key: {k}" for k in unknown])
        flat.update(overrides)
        return ScenarioConfig.from_flat(flat)

    @property
    def rings(self) -> int:
        """Number of hexagonal rings around the centre cell, or -1 when not hexagonal."""
        n = 0
        while 1 + 3 * n * (n + 1) < self.cells:
            n += 1
        return n if 1 + 3 * n * (n + 1) == self.cells else -1

    @property
    def layers(self) -> int:
        """Cluster layer count N_L for ``main_cells`` = 3 N_L (N_L+1), or -1."""
        n = 1
        while 3 * n * (n + 1) < self.main_cells:
            n += 1
        return n if 3 * n * (n + 1) == self.main_cells else -1
