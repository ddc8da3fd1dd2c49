import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqzbudget.cavity import CavityParams, derive_rates
from sqzbudget.chain import (
    CavityStage,
    FrequencyGrid,
    LossElement,
    Scenario,
    build_budget,
    efficiency_sweep,
    homodyne_readout,
    propagate,
    total_efficiency,
)
from sqzbudget.quadcore import (
    SpectralCovariance,
    UnphysicalError,
    apply_loss,
    db_to_variance,
    variance_to_db,
)
from sqzbudget.source import SourceParams

MHZ = 1e6

TABLETOP_ETAS = [0.90, 0.94, 0.95, 0.97, 0.95, 0.95, 0.93]
GEO_ETAS = [0.95, 0.97, 0.99, 0.99, 0.99, 0.93]


def _elements(etas):
    return [LossElement(f"e{i}", eta, "other") for i, eta in enumerate(etas)]


def test_loss_element_validation():
    with pytest.raises(UnphysicalError):
        LossElement("bad", 1.2, "other")
    with pytest.raises(ValueError):
        LossElement("bad", 0.9, "exotic")


def test_total_efficiency_products():
    assert total_efficiency(_elements(TABLETOP_ETAS)) == pytest.approx(0.654328537425, rel=1e-12)
    assert total_efficiency(_elements(GEO_ETAS)) == pytest.approx(0.831541391505, rel=1e-12)
    assert total_efficiency([]) == 1.0
    # the rounded figures quoted alongside the chains
    assert abs(total_efficiency(_elements(TABLETOP_ETAS)) - 0.6543) < 0.0005
    assert abs(total_efficiency(_elements(GEO_ETAS)) - 0.8315) < 0.0005


def test_homodyne_readout():
    assert homodyne_readout(SpectralCovariance.vacuum(), 0.7) == pytest.approx(1.0)
    s = SpectralCovariance.diagonal(0.253, 8.47)
    assert homodyne_readout(s, 0.0) == 0.253
    assert homodyne_readout(s, math.pi / 2) == pytest.approx(8.47, rel=1e-12)
    # complex cross term: only the real part reaches a single quadrature
    sx = SpectralCovariance(1.0, 2.0, 0.3 - 0.4j)
    theta = 0.5
    v = np.array([math.cos(theta), math.sin(theta)])
    assert homodyne_readout(sx, theta) == pytest.approx(
        float((v @ sx.matrix() @ v).real), rel=1e-13)


def test_grid_validation():
    with pytest.raises(ValueError):
        FrequencyGrid(0.0, 15 * MHZ, 10)
    with pytest.raises(ValueError):
        FrequencyGrid(15 * MHZ, 5 * MHZ, 10)
    with pytest.raises(ValueError):
        FrequencyGrid(5 * MHZ, 15 * MHZ, 1)
    g = FrequencyGrid(5 * MHZ, 15 * MHZ, 201)
    f = g.frequencies()
    assert len(f) == 201 and f[0] == 5 * MHZ and f[-1] == 15 * MHZ


def _bare_scenario(stages=(), source=None):
    if source is None:
        source = SourceParams(mode="direct", gen_db_at_dc=0.0, bandwidth_hz=20 * MHZ,
                              escape_eta=1.0)
    return Scenario(name="t", source=source, stages=stages,
                    grid=FrequencyGrid(1 * MHZ, 20 * MHZ, 20))


def test_scenario_rejects_duplicate_roles():
    cav = derive_rates(CavityParams(t_in=0.1, length_m=1.21))
    with pytest.raises(ValueError):
        _bare_scenario(stages=(CavityStage("src", cav), CavityStage("src", cav)))
    with pytest.raises(ValueError):
        CavityStage("recycling", cav)
    with pytest.raises(ValueError):
        CavityStage("src", CavityParams(t_in=0.1, length_m=1.21))  # rates not derived


def test_propagate_vacuum_through_nothing():
    sc = _bare_scenario()
    for f in (1 * MHZ, 10 * MHZ, 20 * MHZ):
        s = propagate(sc, f)
        assert s.s11 == 1.0 and s.s22 == 1.0 and s.s12 == 0j


def test_propagate_checks_grid_bounds():
    sc = _bare_scenario()
    with pytest.raises(ValueError):
        propagate(sc, 0.5 * MHZ)
    with pytest.raises(ValueError):
        propagate(sc, 21 * MHZ)


def test_propagate_tabletop_frozen_values(tabletop):
    expected = {
        5.0: 0.551159040558112234,
        10.0: 0.640227063254904476,
        14.0: 0.68029911618390489,
        15.0: 0.694731880084070246,
    }
    for f_mhz, var in expected.items():
        s = propagate(tabletop, f_mhz * MHZ)
        assert homodyne_readout(s, 0.0) == pytest.approx(var, rel=1e-12)


def test_propagate_stays_physical_across_grid(tabletop):
    for f in tabletop.grid.frequencies():
        s = propagate(tabletop, f)
        assert s.is_positive_semidefinite(tol=1e-9)
        assert s.det() >= 1.0 - 1e-9


def test_frequency_independent_stages_commute(tabletop):
    src = SourceParams(mode="direct", gen_db_at_dc=5.7, bandwidth_hz=20 * MHZ,
                       escape_eta=0.9)
    a = LossElement("a", 0.94, "other")
    b = LossElement("b", 0.95, "other")
    c = LossElement("c", 0.93, "other")
    grid = FrequencyGrid(1 * MHZ, 20 * MHZ, 20)
    one = Scenario("one", src, (a, b, c), grid=grid)
    two = Scenario("two", src, (c, a, b), grid=grid)
    merged = Scenario("merged", src,
                      (LossElement("abc", 0.94 * 0.95 * 0.93, "other"),), grid=grid)
    for f in (1 * MHZ, 7 * MHZ, 20 * MHZ):
        x1, x2, x3 = (propagate(s, f) for s in (one, two, merged))
        assert x1.s11 == pytest.approx(x2.s11, abs=1e-12)
        assert x1.s11 == pytest.approx(x3.s11, abs=1e-12)
        assert x1.s22 == pytest.approx(x3.s22, abs=1e-12)


@given(st.lists(st.floats(min_value=0.3, max_value=1.0), min_size=0, max_size=6))
def test_total_efficiency_order_independent(etas):
    forward = total_efficiency(_elements(etas))
    backward = total_efficiency(_elements(list(reversed(etas))))
    assert forward == pytest.approx(backward, rel=1e-12)
    assert 0.0 <= forward <= 1.0 + 1e-12


def test_efficiency_sweep_frozen_points():
    points = efficiency_sweep(10.0, 0.5, 1.0, 51)
    assert len(points) == 51
    lookup = {round(eta, 6): db for eta, db in points}
    assert lookup[0.83] == pytest.approx(5.968794788241821, abs=1e-9)
    assert lookup[1.0] == pytest.approx(10.0, abs=1e-12)
    assert lookup[0.5] == pytest.approx(variance_to_db(0.55), abs=1e-12)
    thirteen = dict((round(e, 6), d) for e, d in efficiency_sweep(13.0, 0.83, 0.83, 2))
    assert thirteen[0.83] == pytest.approx(6.744873323943808, abs=1e-12)


def test_efficiency_sweep_validation():
    with pytest.raises(ValueError):
        efficiency_sweep(10.0, 0.9, 0.5, 10)
    with pytest.raises(ValueError):
        efficiency_sweep(10.0, 0.5, 1.2, 10)
    with pytest.raises(ValueError):
        efficiency_sweep(10.0, 0.5, 1.0, 1)


@given(st.floats(min_value=0.5, max_value=15.0))
def test_sweep_monotone_and_bounded(input_db):
    points = efficiency_sweep(input_db, 0.0, 1.0, 21)
    dbs = [db for _, db in points]
    assert all(a < b for a, b in zip(dbs, dbs[1:]))
    assert dbs[0] == pytest.approx(0.0, abs=1e-12)
    assert dbs[-1] == pytest.approx(input_db, abs=1e-11)
    assert all(db < input_db for db in dbs[:-1])


def test_budget_tabletop(tabletop):
    report = build_budget(tabletop)
    assert [r.name for r in report.rows][0] == "escape"
    assert report.total == pytest.approx(0.654328537425, rel=1e-12)
    assert report.input_db == 5.7
    assert report.output_db == pytest.approx(2.825073564171736, rel=1e-12)
    subs = dict(report.subtotals)
    assert subs["escape"] == 0.9
    assert subs["mode_matching"] == pytest.approx(0.857375, rel=1e-12)
    assert subs["isolator_rotator"] == pytest.approx(0.9118, rel=1e-12)
    assert subs["photodiode"] == 0.93
    # subtotals keep the reporting category order
    assert [c for c, _ in report.subtotals] == [
        "escape", "mode_matching", "isolator_rotator", "photodiode"]


def test_budget_geo600(geo600):
    report = build_budget(geo600)
    assert report.total == pytest.approx(0.831541391505, rel=1e-12)
    assert report.input_db == 10.0
    assert report.output_db == pytest.approx(5.992673596820453, rel=1e-12)


def test_budget_empty_chain_is_unity():
    sc = _bare_scenario()
    report = build_budget(sc)
    assert report.total == 1.0
    assert report.output_db == pytest.approx(report.input_db, abs=1e-12)


def test_budget_output_consistent_with_sweep(tabletop):
    report = build_budget(tabletop)
    expected = variance_to_db(apply_loss(db_to_variance(report.input_db), report.total))
    assert report.output_db == pytest.approx(expected, rel=1e-14)


def test_scenario_replace_keeps_stages(tabletop):
    # dataclasses.replace round-trips the frozen scenario
    clone = dataclasses.replace(tabletop)
    assert clone == tabletop
