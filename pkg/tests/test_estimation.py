import math

import numpy as np
import pytest

from tsp_core.exceptions import EstimationError
from tsp_core.util import complex_gaussian
from tsp_estimation.bsbs import (
    calibrate_sparsity_ratio,
    cs_bs_estimate,
    cs_pilot_length,
    from_spatial_frequency,
    lmmse_bs_estimate,
    ls_bs_estimate,
    sparsify,
    to_spatial_frequency,
)
from tsp_estimation.cancellation import cancelled_cells, estimate_ici, ic_tsp_estimate
from tsp_estimation.ls import lmmse_surrogate, ls_estimate, ls_estimate_cell, wiener_gain
from tsp_estimation.results import BsBsEstimate
from tsp_experiments.rng import stream
from tsp_signals.compose import compose_bs_pilot, compose_received_pilot
from tsp_signals.pilots import draw_symbols, gaussian_bs_pilots, make_pilot_book, orthogonal_bs_pilots
from tsp_signals.precoding import mf_precoders

from .utils import SmallDrop, small_scenario


def test_ls_estimate_noiseless():
    book = make_pilot_book(4, 4)
    g = complex_gaussian(stream(0, 0, "ms-bs"), 8)
    y = math.sqrt(0.2) * np.outer(g, book[1])
    res = ls_estimate(y, book[1], 0.2, channel=g)
    assert np.allclose(res.estimate, g)
    assert res.mscee == pytest.approx(0, abs=1e-20)
    assert res.terms == {}


def test_ls_estimate_cell():
    book = make_pilot_book(4, 4)
    G = complex_gaussian(stream(0, 0, "ms-bs"), (4, 8))
    rho = np.array([0.1, 0.2, 0.3, 0.4])
    y = (G.T * np.sqrt(rho)[None, :]) @ book.sequences
    assert np.allclose(ls_estimate_cell(y, book, rho), G)


def test_error_needs_channel():
    res = ls_estimate(np.ones((2, 4)), make_pilot_book(1, 4)[0], 1.0)
    with pytest.raises(ValueError):
        res.error


def test_wiener_gain():
    assert wiener_gain(1.0, 1.0) == pytest.approx(0.5)
    assert np.allclose(wiener_gain(np.array([1.0, 3.0]), 1.0), [0.5, 0.75])


def _pilot_block(small):
    sc = small.scenario
    K, N = sc.config.users, sc.pilot_book.length
    symbols = {d: draw_symbols(small.rng_for("data", 0, d, 0), (K, N)) for d in range(sc.topology.num_cells)}
    precoders = {d: mf_precoders(small.channels.ms_bs(d, d)) for d in sc.topology.interferers(0)}
    block = compose_received_pilot(
        0, sc.topology, small.channels, small.powers, sc.pilot_book, precoders, symbols,
        small.rng_for("noise", 0, 0, 0),
    )
    return block, precoders, symbols


def test_lmmse_surrogate():
    small = SmallDrop(small_scenario())
    block, _, _ = _pilot_block(small)
    g = small.channels.ms_bs(0, 0)
    rho = small.powers.ul_pilot[0, 2]
    res = ls_estimate(block, small.scenario.pilot_book[2], rho, channel=g[2])

    beta = small.drop.beta[0, 0, 2]
    mscee = small.analytics.tsp(0, 2).total
    shrunk = lmmse_surrogate(res, beta, mscee)
    assert np.allclose(shrunk.estimate, beta / (beta + mscee) * res.estimate)
    assert "shrinkage" in shrunk.terms
    assert np.linalg.norm(shrunk.term_sum() - shrunk.error) <= 1e-9 * np.linalg.norm(shrunk.error)


def test_cancelled_cells():
    assert cancelled_cells(0, range(7), {0, 5}) == (1, 2, 3, 4, 6)
    assert cancelled_cells(3, {3}, {3}) == ()


def test_ic_with_perfect_bs_estimates():
    small = SmallDrop(small_scenario())
    sc = small.scenario
    block, precoders, symbols = _pilot_block(small)
    group = sc.topology.group_members(0)
    cells = cancelled_cells(0, sc.clusters[0], group)
    assert cells

    estimates = {d: BsBsEstimate(estimate=small.channels.bs_bs(0, d)) for d in cells}
    ici = estimate_ici(0, estimates, precoders, symbols, small.powers.dl_data, sc.clusters[0], group, block.y.shape)
    assert ici.cancelled == cells
    assert ici.noise_parts == {}

    g = small.channels.ms_bs(0, 0)
    psi, rho = sc.pilot_book[0], small.powers.ul_pilot[0, 0]
    ic = ic_tsp_estimate(block, ici, psi, rho, channel=g[0])
    tsp = ls_estimate(block, psi, rho, channel=g[0])

    assert np.linalg.norm(ic.terms["data_residual"]) <= 1e-9 * np.linalg.norm(tsp.terms["data"])
    assert np.allclose(ic.terms["pilot"], tsp.terms["pilot"])
    assert np.allclose(ic.terms["noise"], tsp.terms["noise"])
    assert np.linalg.norm(ic.term_sum() - ic.error) <= 1e-9 * np.linalg.norm(ic.error)


def test_ic_with_ls_bs_estimates():
    small = SmallDrop(small_scenario())
    sc = small.scenario
    block, precoders, symbols = _pilot_block(small)
    group = sc.topology.group_members(0)
    cells = cancelled_cells(0, sc.clusters[0], group)
    P = orthogonal_bs_pilots(sc.antennas)

    estimates = {}
    for d in cells:
        bs_block = compose_bs_pilot(0, d, sc.bs_schedules[0], small.channels, small.powers, P, small.rng_for("bs-pilot", 1, d))
        estimates[d] = ls_bs_estimate(bs_block, P, small.powers.bs_pilot, channel=small.channels.bs_bs(0, d))
    ici = estimate_ici(0, estimates, precoders, symbols, small.powers.dl_data, sc.clusters[0], group, block.y.shape)
    assert set(ici.noise_parts) == set(cells)

    g = small.channels.ms_bs(0, 0)
    ic = ic_tsp_estimate(block, ici, sc.pilot_book[1], small.powers.ul_pilot[0, 1], channel=g[1])
    assert np.linalg.norm(ic.term_sum() - ic.error) <= 1e-9 * np.linalg.norm(ic.error)
    assert np.any(ic.terms["noise_residual"] != 0)


def test_estimate_ici_needs_every_estimate():
    small = SmallDrop(small_scenario())
    sc = small.scenario
    _, precoders, symbols = _pilot_block(small)
    with pytest.raises(EstimationError):
        estimate_ici(
            0, {}, precoders, symbols, small.powers.dl_data, sc.clusters[0],
            sc.topology.group_members(0), (32, 4),
        )


def test_ls_bs_estimate_noiseless():
    G = complex_gaussian(stream(0, 0, "bs-bs"), (16, 16))
    P = orthogonal_bs_pilots(16)
    est = ls_bs_estimate(math.sqrt(2.0) * G @ P, P, 2.0, channel=G)
    assert est.method == "ls" and est.pilot_length == 16
    assert est.relative_error < 1e-9

    shrunk = lmmse_bs_estimate(est, alpha=1.0, error_power=1.0)
    assert shrunk.method == "lmmse"
    assert np.allclose(shrunk.estimate, est.estimate / 2)


def test_spatial_frequency_transform():
    G = complex_gaussian(stream(0, 0, "bs-bs"), (8, 8))
    assert np.allclose(from_spatial_frequency(to_spatial_frequency(G)), G)
    assert np.linalg.norm(to_spatial_frequency(G)) == pytest.approx(np.linalg.norm(G))


def test_sparsify():
    G_bar = np.zeros((8, 8), dtype=complex)
    G_bar[1, 2] = 10.0
    G_bar[5, 2] = math.sqrt(10.0)
    G_bar[3, 6] = 1.0
    G = from_spatial_frequency(G_bar)

    assert sparsify(G, 0.9).count == 1
    support = sparsify(G, 0.95)
    assert support.count == 2
    assert support.column_sparsity == 2
    assert support.mask[1, 2] and support.mask[5, 2]
    assert sparsify(G, 1.0).count == 3
    with pytest.raises(ValueError):
        sparsify(G, 0.0)


def test_cs_pilot_length():
    assert cs_pilot_length(4, 64) == 20
    assert cs_pilot_length(2, 16) == 8
    assert cs_pilot_length(0, 64) == 1


def _column_sparse(M, s, seed):
    rng = stream(seed, 0, "bs-bs")
    G_bar = np.zeros((M, M), dtype=complex)
    for c in range(M):
        rows = rng.choice(M, size=s, replace=False)
        G_bar[rows, c] = np.exp(2j * np.pi * rng.uniform(size=s))
    return from_spatial_frequency(G_bar)


def test_cs_recovers_sparse_channel():
    G = _column_sparse(16, 2, seed=1)
    P = gaussian_bs_pilots(16, 96, stream(1, 0, "bs-pilot"))
    est = cs_bs_estimate(G @ P, P, 1.0, sparsity=2, channel=G)
    assert est.method == "cs" and est.pilot_length == 96 and est.sparsity == 2
    assert not est.flagged
    assert est.relative_error < 1e-6


def test_cs_error_on_dense_channel():
    G = complex_gaussian(stream(2, 0, "bs-bs"), (16, 16))
    tau = cs_pilot_length(2, 16)
    sensing = gaussian_bs_pilots(16, tau, stream(2, 0, "bs-pilot"))
    cs = cs_bs_estimate(G @ sensing, sensing, 1.0, 2, channel=G)
    P = orthogonal_bs_pilots(16)
    ls = ls_bs_estimate(G @ P, P, 1.0, channel=G)
    assert ls.relative_error < 1e-9
    assert cs.relative_error > 0.3


def test_calibrated_sparsity_grows_with_accuracy():
    loose = calibrate_sparsity_ratio(stream(0, 0, "calibration"), 10.0, 0.8, 0.9, antennas=16, draws=5)
    tight = calibrate_sparsity_ratio(stream(0, 0, "calibration"), 10.0, 0.8, 0.99, antennas=16, draws=5)
    assert 0 < loose <= tight <= 1
