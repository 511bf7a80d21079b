"""Closed intervals of positive reals with outward rounding.

Only the handful of operations the eigenvector recurrence needs are
provided. Every result is widened by one ulp on each side, so the true
real-number result is always enclosed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_INF = math.inf


def down(x: float) -> float:
    return math.nextafter(x, -_INF)


def up(x: float) -> float:
    return math.nextafter(x, _INF)


def round_up(value: Fraction) -> float:
    """Smallest float not below an exact rational."""
    f = float(value)
    return f if Fraction(f) >= value else up(f)


def round_down(value: Fraction) -> float:
    f = float(value)
    return f if Fraction(f) <= value else down(f)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def _coerce(self, other) -> Interval:
        return other if isinstance(other, Interval) else Interval.point(float(other))

    def __add__(self, other) -> Interval:
        o = self._coerce(other)
        return Interval(down(self.lo + o.lo), up(self.hi + o.hi))

    __radd__ = __add__

    def __mul__(self, other) -> Interval:
        # operands are nonnegative throughout this package
        o = self._coerce(other)
        if self.lo < 0 or o.lo < 0:
            raise ValueError("Interval multiplication is only defined for nonnegative operands")
        return Interval(down(self.lo * o.lo), up(self.hi * o.hi))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Interval:
        o = self._coerce(other)
        if self.lo < 0 or o.lo <= 0:
            raise ValueError("Interval division needs a nonnegative numerator and positive divisor")
        return Interval(down(self.lo / o.hi), up(self.hi / o.lo))

    def __rtruediv__(self, other) -> Interval:
        return self._coerce(other) / self

    def square(self) -> Interval:
        return self * self

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"
