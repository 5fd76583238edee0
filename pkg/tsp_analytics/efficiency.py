import math

from tsp_network.frame import bs_pilot_overhead


def spectral_efficiency(sinr: float, pilot_ratio: float, bs_pilot_ratio: float = 1.0) -> float:
    """Achievable rate in bps/Hz after the MS-pilot and BS-pilot overheads."""
    if sinr < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr}")
    return pilot_ratio * bs_pilot_ratio * math.log2(1 + sinr)


def min_bs_coherence(
    subcarriers: int,
    sinr: float,
    sinr_ic: float,
    pilot_length: int,
    main_cells: int,
    sectors: int = 1,
    data_as_pilot: bool = False,
) -> float:
    """
    Shortest BS-BS coherence time (in OFDM symbols) for which IC-TSP still
    matches the spectral efficiency of TSP; ``inf`` when IC-TSP has no SINR
    advantage.
    """
    if sinr_ic <= sinr:
        return math.inf
    ratio = math.log2(1 + sinr) / math.log2(1 + sinr_ic)
    overhead = bs_pilot_overhead(pilot_length, main_cells, sectors, data_as_pilot)
    return overhead / (subcarriers * (1 - ratio))
