from . import mscee
from . import sinr
from . import efficiency
from . import sectorization

from .mscee import (
    MsceeBreakdown,
    mscee_tsp,
    mscee_ic_tsp,
    lmmse_mscee,
    bs_error_power,
    mean_pathloss,
    expected_tsp_terms,
    interference_scale_for,
)
from .sinr import (
    SinrBreakdown,
    AntennaRequirement,
    sinr_ul,
    sinr_cl,
    sinr_pd,
    antennas_required,
    population_sinr,
    pooled_breakdown,
)
from .efficiency import spectral_efficiency, min_bs_coherence
from .sectorization import check_sectors, sectorize, sectorize_mscee, sectorize_sinr

__all__ = [
    # Modules
    "mscee",
    "sinr",
    "efficiency",
    "sectorization",
    # Classes
    "MsceeBreakdown",
    "SinrBreakdown",
    "AntennaRequirement",
    # Functions
    "mscee_tsp",
    "mscee_ic_tsp",
    "lmmse_mscee",
    "bs_error_power",
    "mean_pathloss",
    "expected_tsp_terms",
    "interference_scale_for",
    "sinr_ul",
    "sinr_cl",
    "sinr_pd",
    "antennas_required",
    "population_sinr",
    "pooled_breakdown",
    "spectral_efficiency",
    "min_bs_coherence",
    "check_sectors",
    "sectorize",
    "sectorize_mscee",
    "sectorize_sinr",
]
