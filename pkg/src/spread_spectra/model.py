"""Scenario descriptions and the builders that turn them into shift models.

Every construction uses the same spread: the bilateral shift
``e_k^(n) -> e_k^(n+1)`` acting on blocks ``H_n``, which never mixes
channels ``k``.  Multiplying it by a positive diagonal operator ``A``
gives, channel by channel, a bilateral weighted shift whose weights are
the values of ``A`` on consecutive blocks.  The builders below choose
those values; the analysis module reads off the point spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Optional

from .channels import ChannelKind, IntervalSide, Side, WeightChannel, _is_vectorized
from .errors import (
    LimitMismatch,
    ModelError,
    NonPositive,
    NonUnimodular,
    OrderViolation,
    ProvenanceMismatch,
    RangeViolation,
)
from .sequences import (
    CHECK_PREFIX,
    ConvergentFormula,
    ExplicitList,
    PresetFormula,
    SequenceSpec,
    TelescopingRational,
    check_limit,
    check_positive,
    check_strict,
    formula_preset,
)

UNIMODULAR_TOL = 1e-12


class Kind(str, Enum):
    TWO_POINT = "two-point"
    PERIODIC = "periodic"
    PRESCRIBED_CIRCLES = "prescribed-circles"
    COMBINED = "combined"
    ACCUMULATING = "accumulating"
    SINGLE_ESSENTIAL = "single-essential"
    INTERVAL = "interval"


@dataclass(frozen=True)
class PeriodicPattern:
    """Run lengths: forward ``n1`` copies of lambda1 then ``n2`` of lambda2;
    backward ``m2`` copies of lambda2 then ``m1`` of lambda1."""

    n1: int
    n2: int
    m1: int
    m2: int

    def __post_init__(self):
        for name in ("n1", "n2", "m1", "m2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ModelError(f"pattern block length {name} must be an integer >= 1, got {v!r}")


@dataclass(frozen=True)
class PhaseSet:
    phases: tuple[complex, ...] = ()

    def __post_init__(self):
        ph = tuple(complex(p) for p in self.phases)
        for p in ph:
            if abs(abs(p) - 1.0) > UNIMODULAR_TOL:
                raise NonUnimodular(f"phase {p} has modulus {abs(p)}, not 1")
        object.__setattr__(self, "phases", ph)

    def __iter__(self):
        return iter(self.phases)

    def __len__(self):
        return len(self.phases)


def _phase_set(p) -> PhaseSet:
    if p is None:
        return PhaseSet()
    return p if isinstance(p, PhaseSet) else PhaseSet(tuple(p))


@dataclass(frozen=True)
class ScenarioSpec:
    kind: Kind
    lambda1: float
    lambda2: Optional[float] = None
    pattern: Optional[PeriodicPattern] = None
    phases1: Optional[PhaseSet] = None
    phases2: Optional[PhaseSet] = None
    forward_seq: Optional[SequenceSpec] = None
    backward_seq: Optional[SequenceSpec] = None
    alpha_seq: Optional[SequenceSpec] = None
    beta_seq: Optional[SequenceSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        _check_positive_scalar(self.lambda1, "lambda1")
        if self.lambda2 is None:
            if self.kind is not Kind.SINGLE_ESSENTIAL:
                raise ModelError(f"{self.kind.value} scenarios need lambda2")
        else:
            if self.kind is Kind.SINGLE_ESSENTIAL:
                raise ModelError("single-essential scenarios take lambda1 only")
            _check_pair(self.lambda1, self.lambda2)
        needs = {
            Kind.PERIODIC: ("pattern",),
            Kind.ACCUMULATING: ("forward_seq", "backward_seq"),
            Kind.SINGLE_ESSENTIAL: ("forward_seq", "backward_seq"),
            Kind.INTERVAL: ("alpha_seq", "beta_seq"),
        }.get(self.kind, ())
        allowed = set(needs) | {
            Kind.PRESCRIBED_CIRCLES: {"phases1", "phases2"},
            Kind.COMBINED: {"pattern", "phases1", "phases2"},
        }.get(self.kind, set())
        for name in needs:
            if getattr(self, name) is None:
                raise ModelError(f"{self.kind.value} scenarios need {name}")
        for name in ("pattern", "phases1", "phases2", "forward_seq", "backward_seq", "alpha_seq", "beta_seq"):
            if getattr(self, name) is not None and name not in allowed:
                raise ModelError(f"{name} is not used by {self.kind.value} scenarios")
        for name in ("phases1", "phases2"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, _phase_set(getattr(self, name)))


@dataclass(frozen=True)
class ChannelFamily:
    channels: tuple[WeightChannel, ...]
    provenance: ScenarioSpec

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if not self.channels:
            raise ModelError("a channel family needs at least one channel")

    def __len__(self):
        return len(self.channels)

    def __getitem__(self, k):
        return self.channels[k]

    def __iter__(self):
        return iter(self.channels)


@dataclass(frozen=True)
class DiagonalModel:
    eigenvalues: tuple[complex, ...]
    lambda1: float
    lambda2: float

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(complex(z) for z in self.eigenvalues))
        for z in self.eigenvalues:
            r = abs(z)
            if not (math.isclose(r, self.lambda1, rel_tol=UNIMODULAR_TOL) or math.isclose(r, self.lambda2, rel_tol=UNIMODULAR_TOL)):
                raise ModelError(f"diagonal eigenvalue {z} is off both circles")


@dataclass(frozen=True)
class Model:
    shift_part: Optional[ChannelFamily] = None
    diagonal_part: Optional[DiagonalModel] = None

    def __post_init__(self):
        if self.shift_part is None and self.diagonal_part is None:
            raise ModelError("a model needs a shift part, a diagonal part, or both")

    @property
    def channels(self) -> tuple[WeightChannel, ...]:
        return () if self.shift_part is None else self.shift_part.channels

    @property
    def discrete_points(self) -> tuple[complex, ...]:
        return () if self.diagonal_part is None else self.diagonal_part.eigenvalues


# -- checks --------------------------------------------------------------------

def _check_positive_scalar(x, name: str) -> None:
    if isinstance(x, bool) or not isinstance(x, (int, float, Fraction)):
        raise ModelError(f"{name} must be a real number, got {x!r}")
    if not (x > 0 and math.isfinite(x)):
        raise NonPositive(f"{name} must be positive and finite, got {x!r}")


def _check_pair(lambda1, lambda2) -> None:
    _check_positive_scalar(lambda1, "lambda1")
    _check_positive_scalar(lambda2, "lambda2")
    if not lambda1 < lambda2:
        raise OrderViolation(f"need lambda1 < lambda2, got {lambda1} and {lambda2}")


def _check_declared_limit(seq: SequenceSpec, target: float, what: str) -> None:
    if not math.isclose(seq.limit, target, rel_tol=1e-12, abs_tol=0.0):
        raise LimitMismatch(f"{what} is declared to converge to {seq.limit}, expected {target}")


def _check_trend(seq: SequenceSpec, vals, what: str) -> None:
    # a declared direction of approach must hold on the inspected prefix
    if isinstance(seq, ConvergentFormula):
        check_strict(vals, seq.monotone, what)


# -- sequence shifting ---------------------------------------------------------

def _taylor_shift(coeffs: tuple[int, ...], by: int) -> tuple[int, ...]:
    """Coefficients of ``p(x + by)``."""
    out = [0] * len(coeffs)
    for i, a in enumerate(coeffs):
        for k in range(i + 1):
            out[k] += a * comb(i, k) * by ** (i - k)
    return tuple(out)


@dataclass(frozen=True)
class Shifted:
    fn: object
    by: int

    @property
    def vectorized(self) -> bool:
        return _is_vectorized(self.fn)

    def __call__(self, n):
        return self.fn(n + self.by)


def shift_sequence(seq: SequenceSpec, by: int = 1) -> SequenceSpec:
    """The sequence ``j -> seq(j + by)``."""
    if by == 0:
        return seq
    if isinstance(seq, ExplicitList):
        if seq.tail == "constant":
            vals = seq.values[by:] or seq.values[-1:]
            return ExplicitList(vals, "constant")
        r = by % len(seq.values)
        return ExplicitList(seq.values[r:] + seq.values[:r], "cycle")
    if isinstance(seq, TelescopingRational):
        return TelescopingRational(_taylor_shift(seq.poly, by), seq.scale, seq.invert)
    fn = seq.fn
    if isinstance(fn, PresetFormula):
        fn = PresetFormula(fn.family, fn.side, fn.limit, fn.amplitude, fn.shift + by)
    else:
        fn = Shifted(fn, by)
    return ConvergentFormula(fn, seq.limit, seq.monotone)


# -- builders ------------------------------------------------------------------

def build_two_point(lambda1, lambda2, pattern: PeriodicPattern | None = None) -> ChannelFamily:
    """Two-valued weights: the annulus construction or its periodic refinement."""
    _check_pair(lambda1, lambda2)
    l1, l2 = float(lambda1), float(lambda2)
    if pattern is None:
        forward = Side.constant(l1, head=(l2,))
        backward = Side.constant(l2, head=(l1,))
        chan = WeightChannel(forward, backward, ChannelKind.EVENTUALLY_CONSTANT)
        spec = ScenarioSpec(Kind.TWO_POINT, lambda1, lambda2)
    else:
        fwd = (l1,) * pattern.n1 + (l2,) * pattern.n2
        bwd = (l2,) * pattern.m2 + (l1,) * pattern.m1
        chan = WeightChannel(
            Side((), ExplicitList(fwd, "cycle")),
            Side((), ExplicitList(bwd, "cycle")),
            ChannelKind.PERIODIC,
        )
        spec = ScenarioSpec(Kind.PERIODIC, lambda1, lambda2, pattern=pattern)
    return ChannelFamily((chan,), spec)


def build_prescribed_circles(lambda1, lambda2, phases1=None, phases2=None) -> DiagonalModel:
    _check_pair(lambda1, lambda2)
    p1, p2 = _phase_set(phases1), _phase_set(phases2)
    eig = tuple(lambda1 * p for p in p1) + tuple(lambda2 * q for q in p2)
    return DiagonalModel(eig, float(lambda1), float(lambda2))


def build_combined(family: ChannelFamily, diagonal: DiagonalModel) -> Model:
    prov = family.provenance
    if prov.lambda2 is None or (float(prov.lambda1), float(prov.lambda2)) != (diagonal.lambda1, diagonal.lambda2):
        raise ProvenanceMismatch(
            f"shift part built for ({prov.lambda1}, {prov.lambda2}) but diagonal part for "
            f"({diagonal.lambda1}, {diagonal.lambda2})"
        )
    return Model(family, diagonal)


def _kind_for(*seqs: SequenceSpec) -> ChannelKind:
    if all(isinstance(s, TelescopingRational) for s in seqs):
        return ChannelKind.TELESCOPING
    if all(isinstance(s, ExplicitList) for s in seqs):
        return ChannelKind.EVENTUALLY_CONSTANT
    return ChannelKind.CONVERGENT_LIMIT


def build_accumulating(lambda1, lambda2, forward_seq: SequenceSpec, backward_seq: SequenceSpec) -> ChannelFamily:
    """Weights accumulating at lambda1 (forward) and lambda2 (backward).

    ``w_0`` repeats the first backward weight, ``w_n = forward_seq(n)`` for
    ``n >= 1`` and ``w_{-n} = backward_seq(n)``.
    """
    _check_pair(lambda1, lambda2)
    fvals = check_positive(forward_seq)
    bvals = check_positive(backward_seq)
    _check_trend(forward_seq, fvals, "forward sequence")
    _check_trend(backward_seq, bvals, "backward sequence")
    _check_declared_limit(forward_seq, float(lambda1), "forward sequence")
    _check_declared_limit(backward_seq, float(lambda2), "backward sequence")
    check_limit(forward_seq, forward_seq.limit, fvals, "forward sequence")
    check_limit(backward_seq, backward_seq.limit, bvals, "backward sequence")
    head = backward_seq.value(1)
    chan = WeightChannel(
        Side.from_sequence(forward_seq, head=(head,)),
        Side.from_sequence(backward_seq),
        _kind_for(forward_seq, backward_seq),
    )
    spec = ScenarioSpec(Kind.ACCUMULATING, lambda1, lambda2, forward_seq=forward_seq, backward_seq=backward_seq)
    return ChannelFamily((chan,), spec)


def build_single_essential(lambda1, t_seq: SequenceSpec, r_seq: SequenceSpec) -> ChannelFamily:
    """``t_k`` increasing to lambda1 on the forward side, ``r_k`` decreasing to it backward.

    ``w_n = t_{n+1}`` for ``n >= 0`` and ``w_{-n} = r_n``, so the forward
    eigenvector norms at ``|lambda| = lambda1`` are exactly ``prod_{k<=n} t_k / lambda1``.
    """
    _check_positive_scalar(lambda1, "lambda1")
    tvals = check_positive(t_seq)
    rvals = check_positive(r_seq)
    check_strict(tvals, "increasing", "t sequence")
    check_strict(rvals, "decreasing", "r sequence")
    _check_declared_limit(t_seq, float(lambda1), "t sequence")
    _check_declared_limit(r_seq, float(lambda1), "r sequence")
    check_limit(t_seq, t_seq.limit, tvals, "t sequence")
    check_limit(r_seq, r_seq.limit, rvals, "r sequence")
    chan = WeightChannel(Side.from_sequence(t_seq), Side.from_sequence(r_seq), _kind_for(t_seq, r_seq))
    spec = ScenarioSpec(Kind.SINGLE_ESSENTIAL, lambda1, forward_seq=t_seq, backward_seq=r_seq)
    return ChannelFamily((chan,), spec)


def build_interval(lambda1, lambda2, alpha_seq: SequenceSpec, beta_seq: SequenceSpec) -> ChannelFamily:
    """Interval-valued weights from a continuous spectrum filling ``[lambda1, lambda2]``.

    ``w_n`` lies in ``[beta_{n+2}, beta_{n+1}]`` for ``n >= 0`` and ``w_{-n}``
    in ``[alpha_n, alpha_{n+1}]``: the norms of the diagonal blocks built from
    spectral slices of ``A`` accumulating at lambda1 and lambda2.
    """
    _check_pair(lambda1, lambda2)
    avals = check_positive(alpha_seq, CHECK_PREFIX + 1)
    bvals = check_positive(beta_seq, CHECK_PREFIX + 1)
    check_strict(avals, "increasing", "alpha sequence")
    check_strict(bvals, "decreasing", "beta sequence")
    for what, vals in (("alpha", avals), ("beta", bvals)):
        if not (vals.min() > lambda1 and vals.max() < lambda2):
            raise RangeViolation(f"{what} values must lie strictly inside ({lambda1}, {lambda2})")
    _check_declared_limit(alpha_seq, float(lambda2), "alpha sequence")
    _check_declared_limit(beta_seq, float(lambda1), "beta sequence")
    check_limit(alpha_seq, alpha_seq.limit, avals, "alpha sequence")
    check_limit(beta_seq, beta_seq.limit, bvals, "beta sequence")
    forward = IntervalSide(Side.from_sequence(shift_sequence(beta_seq, 1)), Side.from_sequence(beta_seq))
    backward = IntervalSide(Side.from_sequence(alpha_seq), Side.from_sequence(shift_sequence(alpha_seq, 1)))
    chan = WeightChannel(forward, backward, ChannelKind.INTERVAL_BOUNDED)
    spec = ScenarioSpec(Kind.INTERVAL, lambda1, lambda2, alpha_seq=alpha_seq, beta_seq=beta_seq)
    return ChannelFamily((chan,), spec)


def build_model(spec: ScenarioSpec) -> Model:
    """Dispatch a scenario description to its builder."""
    k = spec.kind
    if k in (Kind.TWO_POINT, Kind.PERIODIC):
        return Model(build_two_point(spec.lambda1, spec.lambda2, spec.pattern))
    if k is Kind.PRESCRIBED_CIRCLES:
        return Model(diagonal_part=build_prescribed_circles(spec.lambda1, spec.lambda2, spec.phases1, spec.phases2))
    if k is Kind.COMBINED:
        fam = build_two_point(spec.lambda1, spec.lambda2, spec.pattern)
        diag = build_prescribed_circles(spec.lambda1, spec.lambda2, spec.phases1, spec.phases2)
        return build_combined(fam, diag)
    if k is Kind.ACCUMULATING:
        return Model(build_accumulating(spec.lambda1, spec.lambda2, spec.forward_seq, spec.backward_seq))
    if k is Kind.SINGLE_ESSENTIAL:
        return Model(build_single_essential(spec.lambda1, spec.forward_seq, spec.backward_seq))
    return Model(build_interval(spec.lambda1, spec.lambda2, spec.alpha_seq, spec.beta_seq))


# -- ready-made scenarios ------------------------------------------------------

def _presets() -> dict[str, ScenarioSpec]:
    j_over_j1 = TelescopingRational((0, 1))
    j1_over_j = TelescopingRational((0, 1), invert=True)
    return {
        "two-point": ScenarioSpec(Kind.TWO_POINT, 1.0, 2.0),
        "periodic-1111": ScenarioSpec(Kind.PERIODIC, 1.0, 2.0, pattern=PeriodicPattern(1, 1, 1, 1)),
        "periodic-2112": ScenarioSpec(Kind.PERIODIC, 1.0, 2.0, pattern=PeriodicPattern(2, 1, 1, 2)),
        "periodic-3113": ScenarioSpec(Kind.PERIODIC, 1.0, 2.0, pattern=PeriodicPattern(3, 1, 1, 3)),
        "combined": ScenarioSpec(Kind.COMBINED, 1.0, 2.0, phases1=PhaseSet((1j,)), phases2=PhaseSet((-1,))),
        "accumulating-open": ScenarioSpec(
            Kind.ACCUMULATING, 1.0, 2.0,
            forward_seq=formula_preset("harmonic-above", 1.0),
            backward_seq=formula_preset("harmonic-below", 2.0),
        ),
        "accumulating-closed": ScenarioSpec(
            Kind.ACCUMULATING, 1.0, 2.0,
            forward_seq=j_over_j1,
            backward_seq=TelescopingRational((0, 1), scale=Fraction(2), invert=True),
        ),
        "single-essential": ScenarioSpec(Kind.SINGLE_ESSENTIAL, 1.0, forward_seq=j_over_j1, backward_seq=j1_over_j),
        "interval": ScenarioSpec(
            Kind.INTERVAL, 1.0, 2.0,
            alpha_seq=formula_preset("harmonic-below", 2.0, shift=2.0),
            beta_seq=formula_preset("harmonic-above", 1.0, shift=2.0),
        ),
    }


PRESETS: dict[str, ScenarioSpec] = _presets()
