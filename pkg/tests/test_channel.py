import math

import numpy as np
import pytest

from tsp_core.exceptions import ChannelError
from tsp_experiments.rng import drop_streams, stream
from tsp_network.channel import (
    LargeScaleParams,
    LazyChannels,
    los_component,
    loyka_matrix,
    pathloss_gain,
    sample_bs_bs,
    sample_large_scale,
    sample_ms_bs,
)
from tsp_network.topology import build_hex_layout, drop_users


def test_pathloss_gain():
    assert pathloss_gain(100.0, 3.8) == pytest.approx(100.0**-3.8)
    assert pathloss_gain(100.0, 3.8, 10.0) == pytest.approx(10 * 100.0**-3.8)
    gains = pathloss_gain(np.array([10.0, 20.0]), 2.5)
    assert gains.shape == (2,)
    with pytest.raises(ChannelError):
        pathloss_gain(0.0, 3.8)


def test_large_scale_params():
    with pytest.raises(ChannelError):
        LargeScaleParams(pathloss_exponent=2.0)
    with pytest.raises(ChannelError):
        LargeScaleParams(correlation=1.5)
    with pytest.raises(ChannelError):
        LargeScaleParams(ricean_factor=-1.0)


def test_loyka_matrix():
    R = loyka_matrix(8, 0.8)
    assert R.matrix[0, 3] == pytest.approx(0.8**3)
    assert np.allclose(R.matrix, R.matrix.T)
    assert np.allclose(R.sqrt @ R.sqrt, R.matrix, atol=1e-9)

    # fully correlated: rank one, clipped eigenvalues keep the square root real
    full = loyka_matrix(8, 1.0)
    assert np.allclose(full.sqrt @ full.sqrt, np.ones((8, 8)), atol=1e-6)
    assert np.allclose(loyka_matrix(4, 0.0).sqrt, np.eye(4))


def test_ms_bs_power():
    g = sample_ms_bs(2.0, 4000, stream(0, 0, "ms-bs"))
    assert g.shape == (4000,)
    assert np.mean(np.abs(g) ** 2) == pytest.approx(2.0, rel=0.1)

    many = sample_ms_bs(np.array([[1.0, 4.0]]), 16, stream(0, 0, "ms-bs"))
    assert many.shape == (1, 2, 16)


def test_los_component():
    topology = build_hex_layout(1, 500.0)
    los = los_component(topology, 0, 1, 16)
    assert np.allclose(np.abs(los), 1.0)
    assert np.linalg.matrix_rank(los) == 1
    with pytest.raises(ChannelError):
        los_component(topology, 2, 2, 16)


def test_bs_bs_power():
    topology = build_hex_layout(1, 500.0)
    los = los_component(topology, 0, 1, 32)
    R = loyka_matrix(32, 0.8)

    pure = sample_bs_bs(3.0, math.inf, R, los, stream(0, 0, "bs-bs"))
    assert np.allclose(pure, math.sqrt(3.0) * los)

    G = sample_bs_bs(3.0, 10.0, R, los, stream(0, 0, "bs-bs"))
    assert G.shape == (32, 32)
    assert np.mean(np.abs(G) ** 2) == pytest.approx(3.0, rel=0.1)


def test_large_scale_without_shadowing():
    topology = build_hex_layout(1, 500.0)
    placement = drop_users(topology, 3, stream(0, 0, "placement"))
    params = LargeScaleParams(shadowing_db=0.0)
    drop = sample_large_scale(topology, placement, params, drop_streams(0, 0), mu_cells=[0])

    assert drop.beta.shape == (7, 7, 3)
    assert drop.num_cells == 7 and drop.users == 3
    d = np.hypot(*(placement.positions[2, 1] - topology.centers[4]))
    assert drop.beta[4, 2, 1] == pytest.approx(d**-3.8)
    assert np.all(np.diag(drop.alpha) == 0)
    assert drop.alpha[0, 1] == pytest.approx(topology.distance(0, 1) ** -3.8)
    assert np.allclose(drop.serving_gains()[5], drop.beta[5, 5])

    assert drop.mu[0].shape == (3, 7, 3)
    assert np.all(drop.mu[0][np.arange(3), 0, np.arange(3)] == 0)


def test_large_scale_is_reproducible():
    topology = build_hex_layout(1, 500.0)
    placement = drop_users(topology, 3, stream(1, 2, "placement"))
    params = LargeScaleParams()
    a = sample_large_scale(topology, placement, params, drop_streams(1, 2))
    b = sample_large_scale(topology, placement, params, drop_streams(1, 2))
    c = sample_large_scale(topology, placement, params, drop_streams(1, 3))
    assert np.array_equal(a.beta, b.beta)
    assert not np.array_equal(a.beta, c.beta)


def _channels():
    topology = build_hex_layout(1, 500.0)
    rng_for = drop_streams(0, 0)
    placement = drop_users(topology, 3, rng_for("placement"))
    params = LargeScaleParams()
    drop = sample_large_scale(topology, placement, params, rng_for, mu_cells=[0])
    return LazyChannels(drop, topology, params, 8, rng_for)


def test_lazy_channels():
    channels = _channels()
    g = channels.ms_bs(0, 1)
    assert g.shape == (3, 8)
    assert channels.ms_bs(0, 1) is g
    assert not np.array_equal(channels.ms_bs(0, 1, realization=1), g)
    assert not np.array_equal(channels.ms_bs(0, 1, epoch="previous"), g)

    G = channels.bs_bs(0, 2)
    channels.next_realization()
    assert channels.bs_bs(0, 2) is G
    # draws are keyed by link and realization, so a redraw is identical
    assert np.array_equal(channels.ms_bs(0, 1), g)

    assert channels.ms_ms(0, 1).shape == (3, 3)
    with pytest.raises(ChannelError):
        channels.ms_ms(1, 0)
