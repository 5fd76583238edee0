"""
Signal-level simulation of the centre cell. Blocks are composed from
small-scale channel draws and processed by the actual estimators, giving
empirical MSCEE and SINR values to hold against the closed forms.

Cells outside the centre cell's group precode with surrogate estimates
``g + CN(0, eps)``. Co-group cells keep the pilot-contamination part of
their estimates exactly, with only the remaining error drawn as noise.
"""

import logging
from typing import Dict, Mapping

import numpy as np

from tsp_analytics.efficiency import spectral_efficiency
from tsp_analytics.mscee import bs_error_power
from tsp_core.util import complex_gaussian
from tsp_estimation.bsbs import cs_bs_estimate, lmmse_bs_estimate, ls_bs_estimate
from tsp_estimation.cancellation import cancelled_cells, estimate_ici, ic_tsp_estimate
from tsp_estimation.ls import lmmse_surrogate, ls_estimate
from tsp_estimation.results import BsBsEstimate
from tsp_network.channel import LazyChannels
from tsp_network.frame import precoder_epoch
from tsp_signals.compose import (
    compose_bs_pilot,
    compose_received_cl,
    compose_received_pilot,
    compose_received_ul_data,
    precoded_data,
)
from tsp_signals.pilots import draw_symbols, gaussian_bs_pilots, orthogonal_bs_pilots
from tsp_signals.precoding import build_detectors, build_precoders

from .drop import DropAnalytics
from .rng import StreamFactory

logger = logging.getLogger(__name__)

CENTER = 0


def _surrogate(
    analytics: DropAnalytics,
    channels: LazyChannels,
    rng_for: StreamFactory,
    d: int,
    realization: int,
    epoch: str,
) -> np.ndarray:
    K = analytics.scenario.config.users
    g = channels.ms_bs(d, d, realization, epoch)
    eps = np.array([analytics.tsp(d, k).total for k in range(K)])
    tag = 0 if epoch == "current" else 1
    noise = complex_gaussian(rng_for("estimate-surrogate", realization, tag, d), g.shape)
    return g + np.sqrt(eps)[:, None] * noise


def _contaminated(
    analytics: DropAnalytics,
    channels: LazyChannels,
    rng_for: StreamFactory,
    j: int,
    realization: int,
) -> np.ndarray:
    """Estimate at co-group BS j with the exact contamination by its group."""
    sc = analytics.scenario
    K = sc.config.users
    rho = analytics.powers.ul_pilot
    estimate = channels.ms_bs(j, j, realization).copy()
    for i in sorted(sc.topology.group_members(j)):
        if i != j:
            estimate += np.sqrt(rho[i] / rho[j])[:, None] * channels.ms_bs(j, i, realization)
    rest = np.array([analytics.tsp(j, k).total - analytics.tsp(j, k).pilot for k in range(K)])
    noise = complex_gaussian(rng_for("estimate-surrogate", realization, 2, j), estimate.shape)
    return estimate + np.sqrt(rest)[:, None] * noise


def _bs_estimates(
    analytics: DropAnalytics,
    channels: LazyChannels,
    rng_for: StreamFactory,
    tau_bs: int,
    sparsity: int,
) -> Dict[int, BsBsEstimate]:
    """Estimates at the centre BS of the BS-BS channels it cancels; fixed for the drop."""
    sc = analytics.scenario
    cfg = sc.config
    M = cfg.antennas
    powers = analytics.powers
    schedule = sc.bs_schedules[CENTER]
    cells = cancelled_cells(CENTER, sc.clusters[CENTER], sc.topology.group_members(CENTER))
    if not cells:
        return {}

    method = cfg.bs_estimator
    if method in ("ls", "lmmse"):
        pilots = orthogonal_bs_pilots(M)
    elif method == "cs":
        pilots = gaussian_bs_pilots(M, tau_bs, rng_for("bs-pilot", 0))
    else:
        # precoded DL data doubles as the pilot, scaled to unit power per antenna
        senders = set(cells).union(*(schedule.co_slot(d) for d in cells))
        pilots = {}
        for b in sorted(senders):
            W = build_precoders(_surrogate(analytics, channels, rng_for, b, 0, "current"), cfg.precoder)
            x = draw_symbols(rng_for("bs-pilot", 2, b), (cfg.users, tau_bs), cfg.symbols)
            pilots[b] = precoded_data(W, np.full(cfg.users, M / cfg.users), x)

    estimates = {}
    for d in cells:
        block = compose_bs_pilot(
            CENTER, d, schedule, channels, powers, pilots, rng_for("bs-pilot", 1, d)
        )
        truth = channels.bs_bs(CENTER, d)
        if method in ("ls", "lmmse"):
            est = ls_bs_estimate(block, pilots, powers.bs_pilot, channel=truth)
            if method == "lmmse":
                co_slot, noise = bs_error_power(analytics.drop, schedule, powers, CENTER, d, M)
                est = lmmse_bs_estimate(est, float(analytics.drop.alpha[CENTER, d]), co_slot + noise)
        else:
            sensing = pilots if isinstance(pilots, np.ndarray) else pilots[d]
            est = cs_bs_estimate(block, sensing, powers.bs_pilot, sparsity, channel=truth)
        estimates[d] = est
    return estimates


def _stage_powers(block) -> tuple:
    """Per-MS signal and interference-plus-noise energies of a composed block."""
    signal = np.sum(np.abs(block.target) ** 2, axis=1)
    rest = np.sum(np.abs(block.y - block.target) ** 2, axis=1)
    return signal, rest


def simulate_drop(
    scenario,
    analytics: DropAnalytics,
    channels: LazyChannels,
    rng_for: StreamFactory,
    tau_bs: int,
    sparsity: int,
    ratios: Mapping[str, float],
) -> Dict[str, np.ndarray]:
    cfg = scenario.config
    topology = scenario.topology
    powers = analytics.powers
    drop = analytics.drop
    K, M, N = cfg.users, cfg.antennas, scenario.pilot_book.length
    book = scenario.pilot_book
    group = topology.group_members(CENTER)
    target_group = topology.group_of[CENTER]
    scale = scenario.interference_scale

    bs_estimates = _bs_estimates(analytics, channels, rng_for, tau_bs, sparsity)
    mscee = {"tsp": np.zeros(K), "ic": np.zeros(K)}
    energy = {name: [np.zeros(K), np.zeros(K)] for name in ("tsp.ul", "ic.ul", "tsp.cl", "tsp.pd")}

    for r in range(cfg.realizations):
        # pilot window of the centre cell's group
        symbols = {
            d: draw_symbols(rng_for("data", r, d, 0), (K, N), cfg.symbols) for d in range(topology.num_cells)
        }
        window_precoders = {}
        for d in topology.interferers(CENTER):
            epoch = precoder_epoch(target_group, topology.group_of[d]).value
            est = _surrogate(analytics, channels, rng_for, d, r, epoch)
            window_precoders[d] = build_precoders(est, cfg.precoder)
        block = compose_received_pilot(
            CENTER, topology, channels, powers, book, window_precoders, symbols,
            rng_for("noise", r, CENTER, 0), r, scale,
        )
        ici = estimate_ici(
            CENTER, bs_estimates, window_precoders, symbols, powers.dl_data,
            scenario.clusters[CENTER], group, (M, N), scale,
        )

        g = channels.ms_bs(CENTER, CENTER, r)
        estimates = {"tsp": np.empty((K, M), dtype=complex), "ic": np.empty((K, M), dtype=complex)}
        for k in range(K):
            rho = powers.ul_pilot[CENTER, k]
            results = {
                "tsp": ls_estimate(block, book[k], rho, channel=g[k]),
                "ic": ic_tsp_estimate(block, ici, book[k], rho, channel=g[k]),
            }
            for scheme, res in results.items():
                estimates[scheme][k] = res.estimate
                if cfg.estimator == "lmmse":
                    res = lmmse_surrogate(res, drop.beta[CENTER, CENTER, k], analytics.breakdown(scheme, CENTER, k).total)
                mscee[scheme][k] += res.mscee

        # UL data
        ul_symbols = {j: draw_symbols(rng_for("data", r, j, 1), (K, N), cfg.symbols) for j in range(topology.num_cells)}
        for scheme in ("tsp", "ic"):
            detectors = build_detectors(estimates[scheme], cfg.precoder)
            ul = compose_received_ul_data(
                CENTER, topology, channels, powers, detectors, ul_symbols, rng_for("noise", r, CENTER, 1), r
            )
            s, i = _stage_powers(ul)
            energy[f"{scheme}.ul"][0] += s
            energy[f"{scheme}.ul"][1] += i

        # DL, CL and PD stages with TSP estimates
        dl_precoders = {CENTER: build_precoders(estimates["tsp"], cfg.precoder)}
        for j in range(topology.num_cells):
            if j == CENTER:
                continue
            est = (
                _contaminated(analytics, channels, rng_for, j, r)
                if j in group
                else _surrogate(analytics, channels, rng_for, j, r, "current")
            )
            dl_precoders[j] = build_precoders(est, cfg.precoder)
        dl_symbols = {d: draw_symbols(rng_for("data", r, d, 2), (K, N), cfg.symbols) for d in range(topology.num_cells)}
        for stage, pilot_group, tag in (("cl", scenario.pilot_group(CENTER), 2), ("pd", None, 3)):
            dl = compose_received_cl(
                CENTER, topology, channels, powers, dl_precoders, dl_symbols, book, pilot_group,
                rng_for("noise", r, CENTER, tag), r,
            )
            s, i = _stage_powers(dl)
            energy[f"tsp.{stage}"][0] += s
            energy[f"tsp.{stage}"][1] += i

        channels.next_realization()

    n = cfg.realizations
    columns = {
        "sim.beta": drop.beta[CENTER, CENTER, :].copy(),
        "sim.tsp.mscee": mscee["tsp"] / n,
        "sim.ic.mscee": mscee["ic"] / n,
    }
    for name, (s, i) in energy.items():
        columns[f"sim.{name}.sinr"] = s / i
    columns["sim.se.ul.tsp"] = np.array(
        [spectral_efficiency(v, ratios["tsp"]) for v in columns["sim.tsp.ul.sinr"]]
    )
    columns["sim.se.ul.ic"] = np.array(
        [spectral_efficiency(v, ratios["tsp"], ratios["ic"]) for v in columns["sim.ic.ul.sinr"]]
    )
    if bs_estimates:
        columns["sim.bsbs.error"] = np.full(
            K, float(np.mean([e.relative_error for e in bs_estimates.values()]))
        )
    return columns
