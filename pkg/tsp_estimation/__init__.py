from . import results
from . import ls
from . import omp
from . import bsbs
from . import cancellation

from .results import EstimationResult, BsBsEstimate
from .ls import ls_estimate, ls_estimate_cell, lmmse_surrogate, wiener_gain
from .omp import OmpSolution
from .bsbs import (
    SparseSupport,
    dft_basis,
    ls_bs_estimate,
    lmmse_bs_estimate,
    sparsify,
    cs_pilot_length,
    cs_bs_estimate,
    calibrate_sparsity_ratio,
)
from .cancellation import IciEstimate, cancelled_cells, estimate_ici, ic_tsp_estimate

__all__ = [
    # Modules
    "results",
    "ls",
    "omp",
    "bsbs",
    "cancellation",
    # Classes
    "EstimationResult",
    "BsBsEstimate",
    "OmpSolution",
    "SparseSupport",
    "IciEstimate",
    # Functions
    "ls_estimate",
    "ls_estimate_cell",
    "lmmse_surrogate",
    "wiener_gain",
    "dft_basis",
    "ls_bs_estimate",
    "lmmse_bs_estimate",
    "sparsify",
    "cs_pilot_length",
    "cs_bs_estimate",
    "calibrate_sparsity_ratio",
    "cancelled_cells",
    "estimate_ici",
    "ic_tsp_estimate",
]
