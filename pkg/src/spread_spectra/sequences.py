"""Declarative positive sequences ``s_1, s_2, ...`` used as shift weights.

Three variants cover every construction in the package:

* :class:`ExplicitList` -- finitely many values plus a tail rule.
* :class:`TelescopingRational` -- ``c * p(j) / p(j+1)`` (or its reciprocal
  orientation) for an integer polynomial ``p``; partial products collapse
  to ``c**n * p(1) / p(n+1)`` and are available exactly.
* :class:`ConvergentFormula` -- a callable with a declared limit and
  direction of monotone approach.  Scenario files may only name the
  :class:`PresetFormula` families, which are plain data and compare equal
  by value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .errors import LimitMismatch, ModelError, MonotonicityViolation, NonPositive

#: number of leading terms inspected when validating a sequence
CHECK_PREFIX = 10_000
LIMIT_TOL = 1e-6

TAIL_RULES = ("constant", "cycle")
TRENDS = ("increasing", "decreasing")


@dataclass(frozen=True)
class ExplicitList:
    values: tuple[float, ...]
    tail: str = "constant"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ModelError("explicit sequence needs at least one value")
        if self.tail not in TAIL_RULES:
            raise ModelError(f"unknown tail rule {self.tail!r}; expected one of {TAIL_RULES}")

    def value(self, j: int) -> float:
        if j < 1:
            raise IndexError("sequences are indexed from 1")
        if j <= len(self.values):
            return self.values[j - 1]
        if self.tail == "constant":
            return self.values[-1]
        return self.values[(j - 1) % len(self.values)]

    @property
    def cycle(self) -> tuple[float, ...]:
        return (self.values[-1],) if self.tail == "constant" else self.values

    @property
    def head(self) -> tuple[float, ...]:
        return self.values[:-1] if self.tail == "constant" else ()

    @property
    def limit(self) -> float:
        # geometric mean of the repeating block
        c = self.cycle
        return math.exp(math.fsum(math.log(v) for v in c) / len(c)) if len(c) > 1 else c[0]


def _poly_eval(coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


@dataclass(frozen=True)
class TelescopingRational:
    """Weights ``scale * p(j) / p(j+1)``; with ``invert`` the ratio is flipped.

    ``poly`` holds integer coefficients in ascending order, so ``(0, 1)``
    is ``p(j) = j``.
    """

    poly: tuple[int, ...]
    scale: Fraction = Fraction(1)
    invert: bool = False

    def __post_init__(self):
        coeffs = tuple(int(a) for a in self.poly)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if any(a < 0 for a in coeffs) or coeffs[-1] <= 0:
            raise NonPositive("telescoping polynomial needs nonnegative coefficients and a positive leading term")
        if _poly_eval(coeffs, 1) <= 0:
            raise NonPositive("telescoping polynomial must be positive for j >= 1")
        object.__setattr__(self, "poly", coeffs)
        scale = Fraction(self.scale)
        if scale <= 0:
            raise NonPositive("telescoping scale must be positive")
        object.__setattr__(self, "scale", scale)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def leading(self) -> int:
        return self.poly[-1]

    def p(self, j: int) -> int:
        return _poly_eval(self.poly, j)

    def exact_value(self, j: int) -> Fraction:
        num, den = self.p(j), self.p(j + 1)
        if self.invert:
            num, den = den, num
        return self.scale * Fraction(num, den)

    def value(self, j: int) -> float:
        return float(self.exact_value(j))

    def product_ratio(self, n: int) -> Fraction:
        """``p(1) / p(n+1)``, the non-geometric factor of the n-term product."""
        return Fraction(self.p(1), self.p(n + 1))

    def product(self, n: int) -> Fraction:
        """Exact ``s_1 * ... * s_n``."""
        r = self.product_ratio(n)
        return self.scale ** n * (1 / r if self.invert else r)

    @property
    def limit(self) -> float:
        return float(self.scale)

    @property
    def trend(self) -> str | None:
        if self.degree == 0:
            return None
        return "decreasing" if self.invert else "increasing"


@dataclass(frozen=True)
class PresetFormula:
    """``limit +/- amplitude * g(n + shift)`` for a named decay profile ``g``."""

    family: str
    side: str
    limit: float
    amplitude: float = 1.0
    shift: float = 1.0

    FAMILIES = ("harmonic", "square", "geometric")

    def __post_init__(self):
        if self.family not in self.FAMILIES:
            raise ModelError(f"unknown formula family {self.family!r}")
        if self.side not in ("above", "below"):
            raise ModelError(f"formula side must be 'above' or 'below', got {self.side!r}")
        if not self.amplitude > 0:
            raise ModelError("formula amplitude must be positive")
        if not self.shift > -1:
            raise ModelError("formula shift must exceed -1 so that n + shift > 0 for n >= 1")

    @property
    def name(self) -> str:
        return f"{self.family}-{self.side}"

    def decay(self, n):
        x = n + self.shift
        if self.family == "harmonic":
            return self.amplitude / x
        if self.family == "square":
            return self.amplitude / (x * x)
        return self.amplitude * 2.0 ** (-x)

    def __call__(self, n):
        d = self.decay(n)
        return self.limit + d if self.side == "above" else self.limit - d

    @property
    def trend(self) -> str:
        return "decreasing" if self.side == "above" else "increasing"


PRESET_NAMES = tuple(f"{f}-{s}" for f in PresetFormula.FAMILIES for s in ("above", "below"))


@dataclass(frozen=True)
class ConvergentFormula:
    fn: Callable[[int], float]
    limit: float
    monotone: str

    def __post_init__(self):
        if self.monotone not in TRENDS:
            raise ModelError(f"monotone flag must be one of {TRENDS}")
        if not self.limit > 0:
            raise NonPositive("declared limit must be positive")
        object.__setattr__(self, "limit", float(self.limit))

    def value(self, j: int) -> float:
        return float(self.fn(j))

    @property
    def trend(self) -> str:
        return self.monotone

    @property
    def preset(self) -> PresetFormula | None:
        return self.fn if isinstance(self.fn, PresetFormula) else None


def formula_preset(name: str, limit: float, amplitude: float = 1.0, shift: float = 1.0) -> ConvergentFormula:
    """Build a named formula, e.g. ``formula_preset("harmonic-above", 1.0)`` is ``1 + 1/(n+1)``."""
    try:
        family, side = name.rsplit("-", 1)
    except ValueError:
        raise ModelError(f"unknown formula preset {name!r}") from None
    if name not in PRESET_NAMES:
        raise ModelError(f"unknown formula preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    fn = PresetFormula(family, side, float(limit), float(amplitude), float(shift))
    return ConvergentFormula(fn, float(limit), fn.trend)


SequenceSpec = Union[ExplicitList, TelescopingRational, ConvergentFormula]


def prefix_values(seq: SequenceSpec, n: int = CHECK_PREFIX) -> np.ndarray:
    return np.array([seq.value(j) for j in range(1, n + 1)], dtype=float)


def check_positive(seq: SequenceSpec, n: int = CHECK_PREFIX) -> np.ndarray:
    vals = prefix_values(seq, n)
    if not np.all(np.isfinite(vals)) or not np.all(vals > 0):
        bad = int(np.argmin(np.where(np.isfinite(vals), vals, -np.inf))) + 1
        raise NonPositive(f"sequence value at index {bad} is not strictly positive")
    return vals


def check_strict(vals: np.ndarray, trend: str, what: str = "sequence") -> None:
    d = np.diff(vals)
    ok = np.all(d > 0) if trend == "increasing" else np.all(d < 0)
    if not ok:
        raise MonotonicityViolation(f"{what} is not strictly {trend} over its first {len(vals)} terms")


def extrapolated_limit(vals: np.ndarray) -> float:
    """Aitken extrapolation from the terms at n/4, n/2 and n."""
    n = len(vals)
    a, b, c = vals[n // 4 - 1], vals[n // 2 - 1], vals[n - 1]
    denom = (c - b) - (b - a)
    if denom == 0 or not math.isfinite(denom):
        return float(c)
    est = c - (c - b) ** 2 / denom
    return float(est) if math.isfinite(est) else float(c)


def check_limit(seq: SequenceSpec, declared: float, vals: np.ndarray | None = None, what: str = "sequence") -> None:
    """Raise LimitMismatch unless the prefix is consistent with ``declared``."""
    if vals is None:
        vals = prefix_values(seq)
    if isinstance(seq, ExplicitList):
        if not math.isclose(seq.limit, declared, rel_tol=0, abs_tol=LIMIT_TOL):
            raise LimitMismatch(f"{what} settles at {seq.limit}, not {declared}")
        return
    if abs(vals[-1] - declared) <= LIMIT_TOL:
        return
    est = extrapolated_limit(vals)
    if abs(est - declared) > LIMIT_TOL:
        raise LimitMismatch(f"{what} appears to converge to {est:.9g}, not the declared {declared}")


def seq_limit(seq: SequenceSpec) -> float:
    return seq.limit


def seq_trend(seq: SequenceSpec) -> str | None:
    if isinstance(seq, ExplicitList):
        return None
    return seq.trend
