import math

import numpy as np
import pytest

from tsp_core.config import default_config, validate_config
from tsp_core.decorators import drop_context
from tsp_analytics.mscee import expected_tsp_terms, interference_scale_for
from tsp_core.exceptions import (
    ConfigError,
    DropError,
    EstimationError,
    InsufficientSamplesError,
    UnknownPresetError,
)
from tsp_experiments.aggregate import (
    Estimate,
    _to_db,
    aggregate,
    db_mean,
    dominance_cdf,
    mean_estimate,
    ratio_estimate,
)
from tsp_experiments.drop import DropRecord, run_drop
from tsp_experiments.presets import MSCEE_TARGETS, PRESETS, ExperimentSpec, preset
from tsp_experiments.rng import stream
from tsp_experiments.runner import run_drops, run_experiment
from tsp_experiments.scenario import Scenario

from .utils import SMALL, db, small_config, small_scenario


def test_streams_are_independent_and_reproducible():
    a = stream(1, 2, "ms-bs", 0, 3).standard_normal(4)
    assert np.array_equal(a, stream(1, 2, "ms-bs", 0, 3).standard_normal(4))
    assert not np.array_equal(a, stream(1, 2, "ms-bs", 0, 4).standard_normal(4))
    assert not np.array_equal(a, stream(1, 2, "bs-bs", 0, 3).standard_normal(4))
    assert not np.array_equal(a, stream(1, 3, "ms-bs", 0, 3).standard_normal(4))
    with pytest.raises(ValueError):
        stream(1, 2, "satellite")


def test_scenario():
    sc = small_scenario()
    assert sc.topology.num_cells == 19
    assert sc.targets == (0,)
    assert sc.pilot_group(0) == 1
    assert set(sc.clusters) == set(sc.topology.group_members(0))
    assert sc.bs_pilot_length() == 32
    assert small_scenario({"analysis.averaging": "all"}).targets == tuple(range(19))
    assert small_scenario({"layout.groups": 1}).pilot_group(0) is None


def test_scenario_rejects_invalid_config():
    with pytest.raises(ConfigError) as e:
        Scenario.from_config(small_config({"layout.groups": 5, "layout.users": 5}))
    assert len(e.value.errors) == 2


def test_cs_scenario_uses_frozen_ratio():
    sc = small_scenario({"ic.bs_estimator": "cs", "ic.sparsity_ratio": 0.25})
    assert sc.frozen_sparsity() == 8
    assert sc.bs_pilot_length() == math.ceil(8 * math.log2(8))


def test_run_drop_is_deterministic():
    sc = small_scenario()
    a = run_drop(sc, 3, 7)
    b = run_drop(sc, 3, 7)
    c = run_drop(sc, 4, 7)
    assert a.drop_index == 3
    assert set(a.columns) == set(b.columns)
    for name in a.columns:
        assert np.array_equal(a[name], b[name])
    assert not np.array_equal(a["beta"], c["beta"])
    assert len(a["beta"]) == 4
    assert "tsp.ul.sinr" in a and "sim.beta" not in a


def test_workers_dont_change_results():
    sc = small_scenario()
    serial = run_drops(sc, 4, seed=5, workers=1)
    parallel = run_drops(sc, 4, seed=5, workers=2)
    assert [r.drop_index for r in parallel] == [0, 1, 2, 3]
    for a, b in zip(serial, parallel):
        assert np.array_equal(a["ic.mscee"], b["ic.mscee"])


def test_drop_context():
    @drop_context
    def failing(scenario, drop_index):
        raise EstimationError("singular")

    with pytest.raises(DropError) as e:
        failing(None, 12)
    assert e.value.drop_index == 12
    assert isinstance(e.value.cause, EstimationError)


def test_mean_estimate():
    values = np.array([1.0, 2.0, 3.0, 4.0])
    e = mean_estimate(values)
    assert e.mean == pytest.approx(2.5)
    assert e.n == 4
    assert e.half_width == pytest.approx(1.96 * np.std(values, ddof=1) / 2)
    assert mean_estimate(np.array([5.0])) == Estimate(5.0, 0.0, 1)
    assert math.isnan(mean_estimate(np.zeros(0)).mean)


def test_half_width_shrinks_with_samples():
    base = stream(0, 0, "data").standard_normal(100)
    small = mean_estimate(base)
    large = mean_estimate(np.tile(base, 4))
    assert large.half_width == pytest.approx(small.half_width / 2, rel=0.02)


def test_ratio_and_db():
    e = ratio_estimate(np.array([1.0, 3.0]), np.array([2.0, 2.0]))
    assert e.mean == pytest.approx(1.0)
    db_e = _to_db(Estimate(10.0, 1.0, 50))
    assert db_e.mean == pytest.approx(10.0)
    assert db_e.half_width == pytest.approx(10 / math.log(10) * 0.1)
    assert db_mean(np.array([10.0, 1000.0])).mean == pytest.approx(20.0)


def test_dominance_cdf():
    columns = {"tsp.dominance": np.linspace(0.5, 1.0, 60)}
    records = [DropRecord(0, columns), DropRecord(1, columns)]
    values, probabilities = dominance_cdf(records)
    assert len(values) == 120
    assert np.all(np.diff(values) >= 0)
    assert probabilities[-1] == pytest.approx(1.0)
    with pytest.raises(InsufficientSamplesError):
        dominance_cdf(records[:1])


@pytest.fixture(scope="module")
def small_metrics():
    sc = small_scenario()
    return aggregate(run_drops(sc, 12, seed=1), sc)


def test_aggregate_metrics(small_metrics):
    for name in ("mscee.tsp", "mscee.ic", "dominance.tsp", "sinr.tsp.ul", "sinr.ic.pd.population", "se.ul.ic", "mt", "tmin", "tau_bs"):
        assert name in small_metrics
    assert small_metrics["mscee.tsp"].n == 48
    assert small_metrics["tau_bs"].mean == 32


def test_data_interference_dominates(small_metrics):
    assert small_metrics["dominance.tsp"].mean > 0.85
    assert small_metrics["mscee.ic"].mean < small_metrics["mscee.tsp"].mean


def test_lmmse_lowers_reported_mscee():
    ls = small_scenario()
    lmmse = small_scenario({"estimation.estimator": "lmmse"})
    a = aggregate(run_drops(ls, 4, seed=2), ls)
    b = aggregate(run_drops(lmmse, 4, seed=2), lmmse)
    assert b["mscee.tsp"].mean < a["mscee.tsp"].mean


def test_group_reuse_raises_mscee():
    one = small_scenario({"layout.groups": 1})
    three = small_scenario({"layout.groups": 3})
    a = aggregate(run_drops(one, 8, seed=3), one)
    b = aggregate(run_drops(three, 8, seed=3), three)
    assert b["mscee.tsp"].mean >= a["mscee.tsp"].mean + 3


def test_larger_cluster_cancels_more():
    base = {"layout.cells": 37, "channel.shadowing_db": 0.0}
    l6 = small_scenario({**base, "ic.main_cells": 6})
    l18 = small_scenario({**base, "ic.main_cells": 18})
    a = aggregate(run_drops(l6, 4, seed=4), l6)
    b = aggregate(run_drops(l18, 4, seed=4), l18)
    assert b["mscee.ic"].mean < a["mscee.ic"].mean


def test_signal_level_matches_closed_form():
    sc = small_scenario({"sim.signal_level": True, "sim.realizations": 50})
    records = run_drops(sc, 2, seed=11)
    assert "sim.tsp.mscee" in records[0]

    def pooled(name):
        return sum(float(np.sum(r[name])) for r in records)

    # both sides are summed over the same MSs
    assert abs(db(pooled("sim.tsp.mscee") / pooled("tsp.mscee_ls"))) < 0.5
    assert abs(db(pooled("sim.ic.mscee") / pooled("ic.mscee_ls"))) < 1.5
    assert abs(db(pooled("sim.tsp.ul.sinr") / pooled("tsp.ul.sinr"))) < 1.0
    for r in records:
        assert np.all(r["sim.tsp.pd.sinr"] > 0)
        assert np.all(r["sim.bsbs.error"] > 0)


def test_presets_are_valid():
    for name, spec in PRESETS.items():
        assert spec.name == name
        for series in spec.series:
            for value in spec.grid_for(series):
                assert validate_config(spec.config_for(value, series)) == [], (name, series, value)


def test_experiment_spec():
    assert preset("table2").sweep == "layout.groups"
    with pytest.raises(UnknownPresetError):
        preset("fig99")
    with pytest.raises(ConfigError):
        ExperimentSpec(name="x", sweep="layout.groups", grid=())
    with pytest.raises(ConfigError):
        ExperimentSpec(name="x", sweep="layout.planets", grid=(1,))

    spec = ExperimentSpec(name="x", sweep="layout.groups", grid=(3,), metrics=("mscee",))
    assert spec.wants("mscee.tsp") and not spec.wants("sinr.tsp.ul")
    assert spec.replace(drops=None, seed=4).seed == 4
    assert spec.replace(drops=None).drops == spec.drops


def test_run_experiment():
    spec = ExperimentSpec(
        name="tiny",
        sweep="layout.groups",
        grid=(1, 3),
        overrides=SMALL,
        series={"ls": {}, "lmmse": {"estimation.estimator": "lmmse"}},
        metrics=("mscee.tsp",),
        drops=3,
    )
    report = run_experiment(spec, analytics_only=True)
    assert report.metric_names() == ["mscee.tsp"]
    assert len(report.rows) == 4
    assert report.get("mscee.tsp", 3, "lmmse").mean < report.get("mscee.tsp", 3, "ls").mean
    with pytest.raises(KeyError):
        report.get("mscee.tsp", 7, "ls")


def test_zf_series_stay_within_the_signal_level_cap():
    spec = preset("fig9")
    cap = spec.scenario.signal_max_antennas
    assert str(cap) in spec.description
    for series in ("zf-l18", "zf-l36"):
        assert spec.grid_for(series) == tuple(m for m in spec.grid if m <= cap)
    assert spec.grid_for("mf-l18") == spec.grid
    assert max(spec.grid) > cap


def test_series_grids():
    spec = ExperimentSpec(
        name="x",
        sweep="array.antennas",
        grid=(32, 64, 128),
        series={"a": {}, "b": {}},
        series_grids={"b": (32, 128, 512)},
    )
    assert spec.grid_for("a") == (32, 64, 128)
    assert spec.grid_for("b") == (32, 128)
    assert spec.replace(grid=(64, 128)).grid_for("b") == (128,)
    with pytest.raises(ConfigError):
        ExperimentSpec(name="x", sweep="array.antennas", grid=(32,), series_grids={"c": (32,)})


def test_interference_modes():
    assert small_scenario().interference_scale == 1.0
    assert small_scenario({"analysis.interference_scale_db": -10.0}).interference_scale == pytest.approx(0.1)

    target = {"analysis.interference": "target", "analysis.mscee_target_db": -10.0}
    sc = small_scenario(target)
    expected = expected_tsp_terms(sc.topology, sc.frame, sc.power, sc.params)
    assert sc.interference_scale == pytest.approx(interference_scale_for(expected, -10.0))
    # the calibrated scale replaces interference_scale_db
    assert small_scenario({**target, "analysis.interference_scale_db": 5.0}).interference_scale == sc.interference_scale

    with pytest.raises(ConfigError):
        small_scenario({**target, "layout.groups": 1})
    with pytest.raises(ConfigError):
        small_scenario({"analysis.interference": "loud"})


def test_reported_mscee_follows_the_target():
    reported = []
    for target in (-20.0, -5.0, 10.0):
        sc = small_scenario({"analysis.interference": "target", "analysis.mscee_target_db": target})
        reported.append(aggregate(run_drops(sc, 4, seed=7), sc)["mscee.tsp"].mean)
    assert reported == sorted(reported)
    assert reported[0] < reported[-1] - 10


@pytest.mark.parametrize("name", ["fig4", "fig5"])
def test_sinr_presets_sweep_the_mscee_target(name):
    spec = preset(name)
    assert spec.sweep == "analysis.mscee_target_db"
    assert spec.grid == MSCEE_TARGETS
    for series in spec.series:
        for value in spec.grid_for(series):
            sc = Scenario.from_config(spec.config_for(value, series))
            assert sc.config.interference == "target"
            assert sc.interference_scale > 0


@pytest.fixture(scope="module")
def default_records():
    sc = Scenario.from_config(default_config())
    return sc, run_drops(sc, 3, seed=8)


def test_data_interference_share_at_defaults(default_records):
    _, records = default_records
    share = np.concatenate([r["tsp.dominance"] for r in records])
    assert share.size == 60
    assert np.mean(share >= 0.85) >= 0.8


@pytest.mark.parametrize("mscee_db", [-10.0, 10.0])
def test_required_antennas_at_defaults(mscee_db):
    sc = Scenario.from_config(default_config().override({"analysis.imposed_mscee_db": mscee_db}))
    m_t = aggregate(run_drops(sc, 5, seed=9), sc)["mt"].mean
    if mscee_db < 0:
        assert m_t < 300
    else:
        assert m_t > 2000
