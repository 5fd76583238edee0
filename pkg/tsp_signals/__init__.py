from . import power
from . import pilots
from . import precoding
from . import compose

from .power import PowerConfig, PowerAllocation
from .pilots import (
    PilotBook,
    make_pilot_book,
    orthogonal_bs_pilots,
    gaussian_bs_pilots,
    draw_symbols,
)
from .precoding import (
    ZfPrecoders,
    mf_precoder,
    mf_precoders,
    zf_precoders,
    mf_detectors,
    zf_detectors,
    build_precoders,
    build_detectors,
)
from .compose import (
    ReceivedPilotBlock,
    UlDataBlock,
    DlBlock,
    BsPilotBlock,
    precoded_data,
    compose_received_pilot,
    compose_received_ul_data,
    compose_received_cl,
    compose_bs_pilot,
)

__all__ = [
    # Modules
    "power",
    "pilots",
    "precoding",
    "compose",
    # Classes
    "PowerConfig",
    "PowerAllocation",
    "PilotBook",
    "ZfPrecoders",
    "ReceivedPilotBlock",
    "UlDataBlock",
    "DlBlock",
    "BsPilotBlock",
    # Functions
    "make_pilot_book",
    "orthogonal_bs_pilots",
    "gaussian_bs_pilots",
    "draw_symbols",
    "mf_precoder",
    "mf_precoders",
    "zf_precoders",
    "mf_detectors",
    "zf_detectors",
    "build_precoders",
    "build_detectors",
    "precoded_data",
    "compose_received_pilot",
    "compose_received_ul_data",
    "compose_received_cl",
    "compose_bs_pilot",
]
