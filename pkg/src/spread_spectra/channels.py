"""Bilateral weight channels.

A channel is a two-sided positive sequence ``w_n`` (``n`` in Z) read as the
weights of a bilateral weighted shift ``e_n -> w_n e_{n+1}``.  It is stored
as two one-sided halves, each a :class:`Side` enumerating its weights away
from the origin:

* ``forward`` has ``s_k = w_{k-1}`` (k >= 1), i.e. ``w_0, w_1, w_2, ...``
* ``backward`` has ``s_k = w_{-k}``, i.e. ``w_{-1}, w_{-2}, ...``

A side is a finite irregular ``head`` followed by a regular ``law``
(a repeating cycle, a telescoping rational, or a monotone formula).  The
regular law is what the analysis module reasons about; the head only
contributes a finite prefix.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .errors import ModelError, NonPositive
from .interval import Interval
from .sequences import ConvergentFormula, ExplicitList, PresetFormula, SequenceSpec, TelescopingRational


class ChannelKind(str, Enum):
    EVENTUALLY_CONSTANT = "EventuallyConstant"
    PERIODIC = "Periodic"
    CONVERGENT_LIMIT = "ConvergentLimit"
    TELESCOPING = "Telescoping"
    INTERVAL_BOUNDED = "IntervalBounded"


@dataclass(frozen=True)
class Mapped:
    """Pointwise ``c * fn(n)`` or ``1 / fn(n)``; keeps value equality of presets."""

    fn: Callable
    op: str
    factor: float = 1.0

    @property
    def vectorized(self) -> bool:
        return _is_vectorized(self.fn)

    def __call__(self, n):
        v = self.fn(n)
        return self.factor * v if self.op == "scale" else 1.0 / v


def _is_vectorized(fn) -> bool:
    return isinstance(fn, PresetFormula) or bool(getattr(fn, "vectorized", False))


def _scale_law(law, c: float):
    if isinstance(law, ExplicitList):
        return ExplicitList(tuple(c * v for v in law.values), "cycle")
    if isinstance(law, TelescopingRational):
        return TelescopingRational(law.poly, law.scale * Fraction(c), law.invert)
    return ConvergentFormula(Mapped(law.fn, "scale", c), c * law.limit, law.monotone)


def _invert_law(law):
    if isinstance(law, ExplicitList):
        return ExplicitList(tuple(1.0 / v for v in law.values), "cycle")
    if isinstance(law, TelescopingRational):
        return TelescopingRational(law.poly, 1 / law.scale, not law.invert)
    flipped = "decreasing" if law.monotone == "increasing" else "increasing"
    return ConvergentFormula(Mapped(law.fn, "reciprocal"), 1.0 / law.limit, flipped)


@dataclass(frozen=True)
class Side:
    head: tuple[float, ...]
    law: Union[ExplicitList, TelescopingRational, ConvergentFormula]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(float(h) for h in self.head))
        if any(not (h > 0 and math.isfinite(h)) for h in self.head):
            raise NonPositive("channel weights must be strictly positive")
        if isinstance(self.law, ExplicitList) and self.law.tail != "cycle":
            raise ModelError("side laws hold explicit values as a repeating cycle")
        self._cache["lock"] = threading.Lock()

    @classmethod
    def from_sequence(cls, seq: SequenceSpec, head=()) -> Side:
        if isinstance(seq, ExplicitList):
            return cls(tuple(head) + seq.head, ExplicitList(seq.cycle, "cycle"))
        return cls(tuple(head), seq)

    @classmethod
    def constant(cls, value: float, head=()) -> Side:
        return cls(tuple(head), ExplicitList((value,), "cycle"))

    # -- structure ---------------------------------------------------------

    @property
    def prefix(self) -> int:
        return len(self.head)

    @property
    def kind(self) -> str:
        if isinstance(self.law, ExplicitList):
            return "periodic"
        if isinstance(self.law, TelescopingRational):
            return "telescoping"
        return "monotone"

    @property
    def limit(self) -> float:
        return self.law.limit

    @property
    def trend(self) -> str | None:
        return None if isinstance(self.law, ExplicitList) else self.law.trend

    @property
    def cycle(self) -> tuple[float, ...]:
        return self.law.values

    # -- values --------------------------------------------------------------

    def value(self, k: int) -> float:
        if k < 1:
            raise IndexError("side weights are indexed from 1")
        if k <= self.prefix:
            return self.head[k - 1]
        return self.law.value(k - self.prefix)

    def exact_value(self, k: int) -> Fraction:
        if k > self.prefix and isinstance(self.law, TelescopingRational):
            return self.law.exact_value(k - self.prefix)
        return Fraction(self.value(k))

    def product_exact(self, m: int) -> Fraction:
        """Exact ``s_1 * ... * s_m`` for periodic and telescoping sides."""
        prod = Fraction(1)
        for h in self.head[:m]:
            prod *= Fraction(h)
        j = m - self.prefix
        if j <= 0:
            return prod
        if isinstance(self.law, TelescopingRational):
            return prod * self.law.product(j)
        if isinstance(self.law, ExplicitList):
            cyc = [Fraction(v) for v in self.law.values]
            full, rest = divmod(j, len(cyc))
            block = math.prod(cyc)
            return prod * block ** full * math.prod(cyc[:rest])
        raise ModelError("no closed-form product for a formula side")

    def _law_values(self, j0: int, j1: int) -> np.ndarray:
        """Regular-law values for law indices ``j0 <= j < j1``."""
        j = np.arange(j0, j1, dtype=float)
        law = self.law
        if isinstance(law, ExplicitList):
            cyc = np.asarray(law.values, dtype=float)
            return cyc[(np.arange(j0, j1) - 1) % len(cyc)]
        if isinstance(law, TelescopingRational):
            coeffs = np.asarray(law.poly[::-1], dtype=float)
            a, b = np.polyval(coeffs, j), np.polyval(coeffs, j + 1)
            ratio = b / a if law.invert else a / b
            return float(law.scale) * ratio
        if _is_vectorized(law.fn):
            return np.asarray(law.fn(j), dtype=float)
        return np.array([law.value(int(x)) for x in range(j0, j1)], dtype=float)

    def values(self, start: int, stop: int) -> np.ndarray:
        """Array of ``s_k`` for ``start <= k < stop`` (``start >= 1``)."""
        if start < 1:
            raise IndexError("side weights are indexed from 1")
        with self._cache["lock"]:
            arr = self._cache.get("arr")
            have = 0 if arr is None else len(arr)
            if stop - 1 > have:
                want = max(stop - 1, 2 * have, 1024)
                head = np.asarray(self.head, dtype=float)
                if have < self.prefix:
                    new = np.concatenate([head[have:], self._law_values(1, want - self.prefix + 1)])
                else:
                    new = self._law_values(have - self.prefix + 1, want - self.prefix + 1)
                if np.any(~(new > 0)):
                    raise NonPositive("channel weights must be strictly positive")
                arr = new if arr is None else np.concatenate([arr, new])
                self._cache["arr"] = arr
        return arr[start - 1:stop - 1]

    # -- transforms ----------------------------------------------------------

    def scaled(self, c: float) -> Side:
        return Side(tuple(c * h for h in self.head), _scale_law(self.law, c))

    def reciprocal(self) -> Side:
        return Side(tuple(1.0 / h for h in self.head), _invert_law(self.law))


@dataclass(frozen=True)
class IntervalSide:
    """Weights known only to lie in ``[lo.s_k, hi.s_k]``."""

    lo: Side
    hi: Side

    @property
    def limit(self) -> float:
        return self.lo.limit

    @property
    def prefix(self) -> int:
        return max(self.lo.prefix, self.hi.prefix)

    def value(self, k: int) -> Interval:
        return Interval(self.lo.value(k), self.hi.value(k))

    def scaled(self, c: float) -> IntervalSide:
        return IntervalSide(self.lo.scaled(c), self.hi.scaled(c))

    def reciprocal(self) -> IntervalSide:
        return IntervalSide(self.hi.reciprocal(), self.lo.reciprocal())


AnySide = Union[Side, IntervalSide]


@dataclass(frozen=True)
class WeightChannel:
    forward: AnySide
    backward: AnySide
    kindtag: ChannelKind

    @property
    def is_interval(self) -> bool:
        return isinstance(self.forward, IntervalSide)

    def weight_at(self, n: int):
        """Weight ``w_n``; a float, or an :class:`Interval` for interval channels."""
        n = int(n)
        return self.forward.value(n + 1) if n >= 0 else self.backward.value(-n)

    @property
    def forward_limit(self) -> float:
        return self.forward.limit

    @property
    def backward_limit(self) -> float:
        return self.backward.limit

    def closed_form_product(self, n: int) -> Fraction | None:
        """Exact ``w_1 * ... * w_n`` for telescoping channels, else ``None``."""
        if self.kindtag is not ChannelKind.TELESCOPING or self.is_interval:
            return None
        if n < 0:
            raise ValueError("product length must be nonnegative")
        return self.forward.product_exact(n + 1) / self.forward.exact_value(1)

    def scaled(self, c: float) -> WeightChannel:
        if not c > 0:
            raise NonPositive("scale factor must be positive")
        return WeightChannel(self.forward.scaled(c), self.backward.scaled(c), self.kindtag)

    def inverted(self) -> WeightChannel:
        """Reciprocal weights with the two halves swapped (the inverse operator, reflected)."""
        return WeightChannel(self.backward.reciprocal(), self.forward.reciprocal(), self.kindtag)

    def midpoint(self) -> WeightChannel:
        """Scalar channel of interval midpoints; identity for scalar channels."""
        if not self.is_interval:
            return self
        return WeightChannel(_MidSide.of(self.forward), _MidSide.of(self.backward), ChannelKind.CONVERGENT_LIMIT)


class _MidSide:
    @staticmethod
    def of(side: IntervalSide) -> Side:
        lo, hi = side.lo, side.hi
        fn = _Midpoint(lo, hi)
        law = ConvergentFormula(fn, lo.limit, lo.trend or "decreasing")
        return Side((), law)


@dataclass(frozen=True)
class _Midpoint:
    lo: Side
    hi: Side

    def __call__(self, n):
        return 0.5 * (self.lo.value(int(n)) + self.hi.value(int(n)))
