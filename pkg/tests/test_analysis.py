import math
from concurrent.futures import ThreadPoolExecutor

import pytest

from spread_spectra.analysis import (
    BUDGET_ENV,
    Budget,
    GridSpec,
    Status,
    boundary_condition,
    classify_membership,
    classify_model,
    eigen_profile,
    geometric_mean_limits,
    grid_classify,
    model_region,
    numeric_geometric_means,
)
from spread_spectra.errors import BadGrid, MonotonicityViolation, ZeroLambda
from spread_spectra.model import PRESETS, PeriodicPattern, build_accumulating, build_model, build_two_point
from spread_spectra.sequences import ExplicitList, TelescopingRational, formula_preset

from oracles import basel_minus_one


def channel(name):
    return build_model(PRESETS[name]).channels[0]


def test_profile_two_point_hand_values():
    p = eigen_profile(channel("two-point"), 1.5, 2)
    expected = {-2: 9 / 8, -1: 3 / 2, 0: 1, 1: 4 / 3, 2: 8 / 9}
    assert p.norms.keys() == expected.keys()
    for n, v in expected.items():
        assert p.norms[n] == pytest.approx(v, rel=1e-15)
    assert p.forward_sum == pytest.approx(16 / 9 + 64 / 81)


def test_profile_constant_tail_is_flat():
    p = eigen_profile(channel("two-point"), 1.0, 50)
    assert all(p.norms[n] == 2.0 for n in range(1, 51))


def test_profile_errors():
    with pytest.raises(ZeroLambda):
        eigen_profile(channel("two-point"), 0, 3)
    with pytest.raises(ValueError):
        eigen_profile(channel("two-point"), 1.5, 0)


def test_interval_profile_contains_midpoint_profile():
    ch = channel("interval")
    iv = eigen_profile(ch, 1.5, 10)
    mid = eigen_profile(ch.midpoint(), 1.5, 10)
    for n, v in mid.norms.items():
        assert iv.norms[n].lo <= v <= iv.norms[n].hi


def test_geometric_means_exact():
    g = geometric_mean_limits(channel("two-point"))
    assert (g.forward, g.backward, g.exact) == (1.0, 2.0, True)
    g = geometric_mean_limits(channel("periodic-2112"))
    assert g.forward == pytest.approx(2 ** (1 / 3), abs=1e-12)
    assert g.backward == pytest.approx(2 ** (2 / 3), abs=1e-12)
    g = geometric_mean_limits(channel("single-essential"))
    assert (g.forward, g.backward) == (1.0, 1.0)


def test_geometric_means_interval_ranges():
    g = geometric_mean_limits(channel("interval"))
    assert not g.exact
    assert g.forward_range == (1.0, 1.0) and g.backward_range == (2.0, 2.0)


def test_geometric_means_numeric():
    g = numeric_geometric_means(channel("periodic-3113"))
    assert g.forward == pytest.approx(2 ** 0.25, abs=1e-6)
    assert g.backward == pytest.approx(2 ** 0.75, abs=1e-6)
    assert not g.exact


@pytest.mark.parametrize("r, status", [(0.5, Status.EXCLUDED), (1.0, Status.EXCLUDED), (1.5, Status.IN),
                                       (2.0, Status.EXCLUDED), (2.5, Status.EXCLUDED)])
def test_two_point_verdicts(r, status):
    assert classify_membership(channel("two-point"), r).status is status


def test_two_point_exact_bound():
    v = classify_membership(channel("two-point"), 1.5)
    exact = 1 + (16 / 9) / (1 - 4 / 9) + 2.25 / (1 - 0.5625)
    assert exact <= v.sum_bound <= exact * (1 + 1e-12)


def test_boundary_witness_for_two_point():
    v = classify_membership(channel("two-point"), 1.0)
    assert v.divergence_index == 1 and v.divergence_ratio == 1.0
    v = classify_membership(channel("two-point"), 2.0)
    assert v.divergence_index == -1 and v.divergence_ratio == 1.0


def test_single_essential_circle_bound():
    v = classify_membership(channel("single-essential"), 1j)
    target = 1 + 2 * basel_minus_one()
    assert v.status is Status.IN
    assert target <= v.sum_bound <= target + 1e-6


def test_periodic_boundary_circle_excluded():
    ch = channel("periodic-2112")
    for r in (2 ** (1 / 3), 2 ** (2 / 3)):
        assert classify_membership(ch, r).status is Status.EXCLUDED
        assert classify_membership(ch, r * complex(math.cos(2.0), math.sin(2.0))).status is Status.EXCLUDED


def test_degenerate_periodic_is_empty():
    reg = model_region(build_model(PRESETS["periodic-1111"])).shift_regions[0]
    assert reg.empty and reg.contains(math.sqrt(2)) is False


def test_monotone_boundary_undetermined_only_on_good_side():
    # weights decrease to 1 from above forward: |lambda| = 1 is certified out
    ch = channel("accumulating-open")
    assert classify_membership(ch, 1.0).status is Status.EXCLUDED
    # weights increasing to 1 forward: the circle cannot be decided without closed forms
    fam = build_accumulating(1, 2, formula_preset("harmonic-below", 1, shift=2), formula_preset("harmonic-above", 2))
    v = classify_membership(fam[0], 1.0)
    assert v.status is Status.UNDETERMINED
    assert "boundary" in v.note


def test_small_budget_gives_undetermined_not_excluded():
    fam = build_accumulating(1, 2, formula_preset("harmonic-above", 1), formula_preset("harmonic-below", 2))
    v = classify_membership(fam[0], 1.0001, Budget(n_max=50))
    assert v.status is Status.UNDETERMINED


def test_accumulating_closed_region():
    reg = model_region(build_model(PRESETS["accumulating-closed"])).shift_regions[0]
    assert (reg.inner_radius, reg.outer_radius, reg.inner_closed, reg.outer_closed) == (1.0, 2.0, True, True)


def test_region_reports():
    rep = model_region(build_model(PRESETS["two-point"]))
    r = rep.shift_regions[0]
    assert (r.inner_radius, r.outer_radius, r.inner_closed, r.outer_closed) == (1.0, 2.0, False, False)
    rep = model_region(build_model(PRESETS["single-essential"]))
    r = rep.shift_regions[0]
    assert r.degenerate_circle and r.inner_closed and r.inner_radius == 1.0
    rep = model_region(build_model(PRESETS["combined"]))
    assert rep.discrete_points == (1j, -2 + 0j)
    assert "subset" in rep.union_note


def test_classify_model_union():
    m = build_model(PRESETS["combined"])
    assert classify_model(m, 1j).status is Status.IN
    assert classify_model(m, -2).status is Status.IN
    assert classify_model(m, 2).status is Status.EXCLUDED
    assert classify_model(m, 1.5j).status is Status.IN


def test_boundary_condition_telescoping():
    rep = boundary_condition(TelescopingRational((0, 1)), TelescopingRational((0, 1), invert=True), 1.0)
    assert rep.satisfied
    assert rep.forward_sum_bound == pytest.approx(basel_minus_one(), abs=1e-6)
    assert rep.forward_sum_bound >= basel_minus_one()


def test_boundary_condition_geometric_and_violation():
    rep = boundary_condition(ExplicitList((0.5,)), ExplicitList((2.0,)), 1.0)
    assert rep.satisfied and rep.forward_sum_bound == pytest.approx(1 / 3)
    with pytest.raises(MonotonicityViolation):
        boundary_condition(ExplicitList((1.0,)), ExplicitList((2.0,)), 1.0)


def test_boundary_condition_formula_is_undetermined():
    # 1 - 1/(k+1)^2 has a convergent product; no closed form, so no verdict
    rep = boundary_condition(formula_preset("square-below", 1.0), ExplicitList((2.0,)), 1.0)
    assert rep.forward_status == "undetermined" and rep.forward_sum_bound is None
    assert rep.backward_status == "finite"
    assert not rep.satisfied


def test_grid_rows_and_errors():
    m = build_model(PRESETS["two-point"])
    res = grid_classify(m, GridSpec(0.5, 2.5, 3, 1))
    assert [row.status for row in res.rows] == [Status.EXCLUDED, Status.IN, Status.EXCLUDED]
    with pytest.raises(BadGrid):
        GridSpec(2.0, 1.0, 3, 3)
    with pytest.raises(BadGrid):
        GridSpec(0.5, 1.0, 0, 3)


def test_grid_same_verdict_around_circle():
    m = build_model(PRESETS["accumulating-open"])
    res = grid_classify(m, GridSpec(1.3, 1.7, 1, 8))
    assert len({row.status for row in res.rows}) == 1 and len({row.witness for row in res.rows}) == 1


def test_grid_concurrent_matches_sequential():
    m = build_model(PRESETS["periodic-3113"])
    spec = GridSpec(0.5, 2.5, 9, 4)
    with ThreadPoolExecutor(4) as ex:
        par = grid_classify(m, spec, executor=ex)
    assert par.rows == grid_classify(m, spec).rows


def test_interval_grid_point_is_certified():
    v = classify_membership(channel("interval"), 1.5)
    assert v.status is Status.IN and math.isfinite(v.sum_bound)


def test_budget_from_env():
    assert Budget.from_env({BUDGET_ENV: "500"}).n_max == 500
    assert Budget.from_env({}).n_max == 100_000
    with pytest.raises(ValueError):
        Budget.from_env({BUDGET_ENV: "lots"})


def test_zero_lambda():
    with pytest.raises(ZeroLambda):
        classify_membership(channel("two-point"), 0j)


def test_general_pattern_radii():
    ch = build_two_point(1, 3, PeriodicPattern(1, 2, 3, 1))[0]
    g = geometric_mean_limits(ch)
    assert g.forward == pytest.approx(9 ** (1 / 3)) and g.backward == pytest.approx(3 ** 0.25)
    assert model_region(build_model(PRESETS["two-point"])).shift_regions[0].contains(1.2) is True
