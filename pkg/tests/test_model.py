import math
from fractions import Fraction

import numpy as np
import pytest

from spread_spectra.channels import ChannelKind, Side, WeightChannel
from spread_spectra.errors import (
    LimitMismatch,
    ModelError,
    MonotonicityViolation,
    NonPositive,
    NonUnimodular,
    OrderViolation,
    ProvenanceMismatch,
    RangeViolation,
)
from spread_spectra.interval import Interval
from spread_spectra.model import (
    PRESETS,
    Kind,
    Model,
    PeriodicPattern,
    PhaseSet,
    ScenarioSpec,
    build_accumulating,
    build_combined,
    build_interval,
    build_model,
    build_prescribed_circles,
    build_single_essential,
    build_two_point,
    shift_sequence,
)
from spread_spectra.sequences import (
    ConvergentFormula,
    ExplicitList,
    PresetFormula,
    TelescopingRational,
    check_positive,
    formula_preset,
)

from oracles import literal_product


def test_two_point_weights():
    ch = build_two_point(1, 2)[0]
    assert ch.kindtag is ChannelKind.EVENTUALLY_CONSTANT
    assert [ch.weight_at(n) for n in range(-3, 4)] == [2, 2, 1, 2, 1, 1, 1]


def test_two_point_order_and_sign():
    with pytest.raises(OrderViolation):
        build_two_point(2, 1)
    with pytest.raises(OrderViolation):
        build_two_point(1, 1)
    with pytest.raises(NonPositive):
        build_two_point(0, 1)


def test_periodic_cycles():
    ch = build_two_point(1, 2, PeriodicPattern(2, 1, 1, 2))[0]
    assert ch.kindtag is ChannelKind.PERIODIC
    assert [ch.weight_at(n) for n in range(0, 6)] == [1, 1, 2, 1, 1, 2]
    assert [ch.weight_at(-n) for n in range(1, 7)] == [2, 2, 1, 2, 2, 1]


def test_pattern_rejects_nonpositive_blocks():
    with pytest.raises(ModelError):
        PeriodicPattern(0, 1, 1, 1)


def test_prescribed_circles():
    d = build_prescribed_circles(1, 2, [1j], [-1])
    assert d.eigenvalues == (1j, -2 + 0j)
    with pytest.raises(NonUnimodular):
        build_prescribed_circles(1, 2, [1.1], [])


def test_combined_needs_matching_lambdas():
    fam = build_two_point(1, 2)
    m = build_combined(fam, build_prescribed_circles(1, 2, [1j], [-1]))
    assert m.discrete_points == (1j, -2 + 0j)
    with pytest.raises(ProvenanceMismatch):
        build_combined(fam, build_prescribed_circles(1, 3, [1j], []))


def test_accumulating_harmonic():
    fam = build_accumulating(1, 2, formula_preset("harmonic-above", 1), formula_preset("harmonic-below", 2))
    ch = fam[0]
    assert ch.kindtag is ChannelKind.CONVERGENT_LIMIT
    assert ch.weight_at(0) == pytest.approx(1.5)  # backward sequence at 1
    assert ch.weight_at(3) == pytest.approx(1.25)
    assert ch.weight_at(-3) == pytest.approx(1.75)


def test_accumulating_rejects_wrong_limit_and_direction():
    with pytest.raises(LimitMismatch):
        build_accumulating(1, 2, formula_preset("harmonic-above", 1.1), formula_preset("harmonic-below", 2))
    mislabelled = ConvergentFormula(PresetFormula("harmonic", "above", 1.0), 1.0, "increasing")
    with pytest.raises(MonotonicityViolation):
        build_accumulating(1, 2, mislabelled, formula_preset("harmonic-below", 2))


def test_accumulating_either_direction():
    ch = build_accumulating(1, 2, formula_preset("harmonic-below", 1, shift=2), formula_preset("harmonic-above", 2))[0]
    assert ch.forward_limit == 1.0 and ch.backward_limit == 2.0


def test_limit_check_accepts_slow_harmonic():
    # 1 + 1/(n+1) is 1e-4 away from its limit at the 10^4-th term
    build_accumulating(1, 2, formula_preset("harmonic-above", 1), formula_preset("harmonic-below", 2))


def test_single_essential_telescoping():
    ch = build_single_essential(1, TelescopingRational((0, 1)), TelescopingRational((0, 1), invert=True))[0]
    assert ch.kindtag is ChannelKind.TELESCOPING
    assert ch.weight_at(0) == 0.5
    assert ch.weight_at(1) == pytest.approx(2 / 3)
    assert ch.weight_at(-1) == 2.0
    # closed-form product against the literal one
    for n in (1, 5, 40):
        lit = literal_product(Fraction(j + 1, j + 2) for j in range(1, n + 1))
        assert ch.closed_form_product(n) == lit


def test_single_essential_wrong_direction():
    with pytest.raises(MonotonicityViolation):
        build_single_essential(1, TelescopingRational((0, 1), invert=True), TelescopingRational((0, 1), invert=True))


def test_interval_channel():
    alpha = formula_preset("harmonic-below", 2, shift=2)
    beta = formula_preset("harmonic-above", 1, shift=2)
    ch = build_interval(1, 2, alpha, beta)[0]
    assert ch.is_interval and ch.kindtag is ChannelKind.INTERVAL_BOUNDED
    w = ch.weight_at(1)
    assert isinstance(w, Interval)
    assert w.lo == pytest.approx(1 + 1 / 5) and w.hi == pytest.approx(1 + 1 / 4)


def test_interval_range_violation():
    alpha = formula_preset("harmonic-below", 2, amplitude=1.5, shift=0.5)
    beta = formula_preset("harmonic-above", 1, shift=2)
    with pytest.raises(RangeViolation):
        build_interval(1, 2, alpha, beta)


def test_nonpositive_sequences():
    with pytest.raises(NonPositive):
        check_positive(ExplicitList((1.0, -1.0)))
    with pytest.raises(NonPositive):
        Side((1.0, 0.0), ExplicitList((1.0,), "cycle"))
    with pytest.raises(NonPositive):
        Side.constant(-1.0).values(1, 3)


def test_phase_set_tolerance():
    PhaseSet((complex(math.cos(1), math.sin(1)),))
    with pytest.raises(NonUnimodular):
        PhaseSet((1.0 + 1e-9,))


def test_scenario_spec_fields():
    with pytest.raises(ModelError):
        ScenarioSpec(Kind.PERIODIC, 1.0, 2.0)
    with pytest.raises(ModelError):
        ScenarioSpec(Kind.TWO_POINT, 1.0, 2.0, pattern=PeriodicPattern(1, 1, 1, 1))
    with pytest.raises(ModelError):
        ScenarioSpec(Kind.SINGLE_ESSENTIAL, 1.0, 2.0)


def test_model_needs_a_part():
    with pytest.raises(ModelError):
        Model()


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_build(name):
    m = build_model(PRESETS[name])
    assert m.channels or m.discrete_points


def test_shift_sequence_matches_direct_shift():
    t = TelescopingRational((1, 2, 1))
    s = shift_sequence(t, 1)
    assert [s.value(j) for j in range(1, 6)] == [t.value(j + 1) for j in range(1, 6)]
    f = formula_preset("square-above", 3)
    g = shift_sequence(f, 2)
    assert np.allclose([g.value(j) for j in range(1, 6)], [f.value(j + 2) for j in range(1, 6)])


def test_inverted_channel_swaps_and_reciprocates():
    ch = build_two_point(1, 2, PeriodicPattern(2, 1, 1, 2))[0]
    inv = ch.inverted()
    for n in range(-7, 7):
        assert inv.weight_at(n) == pytest.approx(1 / ch.weight_at(-n - 1))


def test_scaled_channel():
    ch = build_single_essential(1, TelescopingRational((0, 1)), TelescopingRational((0, 1), invert=True))[0]
    sc = ch.scaled(3.0)
    for n in range(-5, 5):
        assert sc.weight_at(n) == pytest.approx(3 * ch.weight_at(n))
    assert isinstance(sc, WeightChannel) and sc.forward_limit == 3.0
