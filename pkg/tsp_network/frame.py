import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

from tsp_core.exceptions import ScheduleError

logger = logging.getLogger(__name__)


class Epoch(enum.Enum):
    CURRENT = "current"
    PREVIOUS = "previous"


@dataclass(frozen=True)
class FrameSchedule:
    """
    Timing of the shifted-pilot frame and of the BS-pilot super-frame.
    All lengths are in OFDM symbols.
    """

    coherence_symbols: int = 185
    subcarriers: int = 5
    pilot_symbols: int = 4
    dl_symbols: int = 96
    ul_symbols: int = 85
    groups: int = 7
    users: int = 20
    bs_coherence_symbols: float = 92500.0
    bs_pilot_length: int = 128
    main_cells: int = 18

    @classmethod
    def from_config(cls, cfg) -> "FrameSchedule":
        return cls(
            coherence_symbols=cfg.coherence_symbols,
            subcarriers=cfg.subcarriers,
            pilot_symbols=cfg.pilot_symbols,
            dl_symbols=cfg.dl_symbols,
            ul_symbols=cfg.ul_symbols,
            groups=cfg.groups,
            users=cfg.users,
            bs_coherence_symbols=cfg.bs_coherence_symbols,
            bs_pilot_length=cfg.antennas,
            main_cells=cfg.main_cells,
        )

    @property
    def pilot_length(self) -> int:
        """F_c * tau_P, the length of one pilot sequence."""
        return self.subcarriers * self.pilot_symbols

    @property
    def group_offsets(self) -> Tuple[int, ...]:
        return tuple(p * self.pilot_symbols for p in range(self.groups))

    @property
    def bs_pilot_symbols(self) -> int:
        """BS-pilot stage length; its resource elements are spread over all F_c subcarriers."""
        return math.ceil(self.bs_pilot_length * (self.main_cells + 1) / self.subcarriers)

    @property
    def frames_per_superframe(self) -> int:
        if math.isinf(self.bs_coherence_symbols):
            return -1
        return int((self.bs_coherence_symbols - self.bs_pilot_symbols) // self.coherence_symbols)


def validate(schedule: FrameSchedule, superframe: bool = True) -> List[str]:
    violations = []
    s = schedule
    if s.users != s.pilot_length:
        violations.append(
            f"K={s.users} differs from F_c*tau_P={s.subcarriers}*{s.pilot_symbols}={s.pilot_length}"
        )
    if s.pilot_symbols > 0 and s.groups - 1 > s.dl_symbols / s.pilot_symbols:
        violations.append(
            f"{s.groups - 1} other groups don't fit in {s.dl_symbols} DL symbols "
            f"({s.dl_symbols // s.pilot_symbols} pilot windows)"
        )
    offsets = s.group_offsets
    if any(o % max(s.pilot_symbols, 1) for o in offsets):
        violations.append("group pilot offsets are not multiples of tau_P")
    if len({o % s.coherence_symbols for o in offsets}) != len(offsets):
        violations.append("group pilot offsets collide within a coherence block")
    if s.pilot_symbols + s.dl_symbols + s.ul_symbols > s.coherence_symbols:
        violations.append(
            f"tau_P+T_d+T_u={s.pilot_symbols + s.dl_symbols + s.ul_symbols} exceeds T_c={s.coherence_symbols}"
        )
    if superframe and not math.isinf(s.bs_coherence_symbols):
        used = s.frames_per_superframe * s.coherence_symbols + s.bs_pilot_symbols
        if s.frames_per_superframe < 0 or used > s.bs_coherence_symbols:
            violations.append(
                f"BS-pilot stage of {s.bs_pilot_symbols} symbols doesn't fit in T_BS_C={s.bs_coherence_symbols}"
            )
    return violations


def resource_ratio_tsp(schedule: FrameSchedule) -> float:
    return 1 - schedule.pilot_symbols / schedule.coherence_symbols


def bs_pilot_overhead(
    pilot_length: int, main_cells: int, sectors: int = 1, data_as_pilot: bool = False
) -> float:
    """Resource elements spent on BS pilots in one super-frame."""
    return pilot_length * (main_cells / sectors + (0 if data_as_pilot else 1))


def resource_ratio_ic(
    schedule: FrameSchedule,
    main_cells: int,
    pilot_length: int = -1,
    sectors: int = 1,
    data_as_pilot: bool = False,
) -> float:
    tau = schedule.bs_pilot_length if pilot_length < 0 else pilot_length
    overhead = bs_pilot_overhead(tau, main_cells, sectors, data_as_pilot)
    if math.isinf(schedule.bs_coherence_symbols):
        return 1.0
    ratio = 1 - overhead / (schedule.subcarriers * schedule.bs_coherence_symbols)
    if ratio < 0:
        raise ScheduleError(
            f"BS-pilot overhead {overhead:g} exceeds F_c*T_BS_C="
            f"{schedule.subcarriers * schedule.bs_coherence_symbols:g}"
        )
    return ratio


def precoder_epoch(target_group: int, interferer_group: int) -> Epoch:
    """Groups earlier in pilot order have already refreshed their precoders."""
    if interferer_group < target_group:
        return Epoch.CURRENT
    if interferer_group > target_group:
        return Epoch.PREVIOUS
    return Epoch.CURRENT
