"""Point-spectrum membership for weighted shift channels.

An eigenvector of the weighted shift for eigenvalue ``lam`` is forced by
``lam * x_n = w_{n-1} * x_{n-1}``.  With ``x_0 = 1`` its block norms are

    |x_n|  = (w_0 * ... * w_{n-1}) / |lam|**n        (n >= 1)
    |x_-m| = |lam|**m / (w_-1 * ... * w_-m)          (m >= 1)

so ``lam`` is an eigenvalue exactly when both one-sided sums of ``|x_n|**2``
converge.  Each side is decided separately:

* periodic sides (including eventually constant ones) are decided exactly
  by comparing ``|lam|**p`` with the product over one period;
* telescoping sides have closed-form products, which settles even the
  boundary circle;
* monotone sides are summed numerically with a geometric tail bound, or
  shown divergent by a ratio certificate; on their own boundary circle they
  are left undetermined unless the approach direction already forces
  divergence.

Verdicts depend on ``lam`` only through ``|lam|``.  Moduli within a few
ulps of a side's limit are treated as lying on that circle, so that
``exp(i*theta)`` is classified like ``1``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import Executor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import numpy as np

from .channels import IntervalSide, Side, WeightChannel
from .errors import BadGrid, MonotonicityViolation, ZeroLambda
from .interval import Interval, round_up, up
from .model import Model
from .sequences import SequenceSpec, TelescopingRational, check_positive

BUDGET_ENV = "SPREAD_SPECTRA_BUDGET"
SNAP_ULPS = 8
EXACT_TERMS = 1000
_U = 2.0 ** -53


@dataclass(frozen=True)
class Budget:
    n_max: int = 100_000
    precision: float = 1e-9

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("budget n_max must be positive")
        if not self.precision > 0:
            raise ValueError("budget precision must be positive")

    @classmethod
    def from_env(cls, environ=None) -> Budget:
        env = os.environ if environ is None else environ
        raw = env.get(BUDGET_ENV)
        if not raw:
            return cls()
        try:
            return cls(n_max=int(raw))
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be a positive integer, got {raw!r}") from None


class Status(str, Enum):
    IN = "InPointSpectrum"
    EXCLUDED = "Excluded"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class SideResult:
    status: str  # "summable" | "divergent" | "unknown"
    bound: Optional[float] = None  # upper bound on sum_{n>=1} |x_{+-n}|^2
    index: Optional[int] = None
    ratio: Optional[float] = None
    terms: int = 0
    note: str = ""


@dataclass(frozen=True)
class MembershipVerdict:
    status: Status
    lam: complex
    sum_bound: Optional[float] = None
    divergence_index: Optional[int] = None
    divergence_ratio: Optional[float] = None
    terms: int = 0
    note: str = ""

    @property
    def witness_value(self) -> float:
        if self.status is Status.IN:
            return self.sum_bound
        if self.status is Status.EXCLUDED and self.divergence_ratio is not None:
            return self.divergence_ratio
        return math.nan

    def __str__(self) -> str:
        if self.status is Status.IN:
            w = f"sum |x_n|^2 <= {self.sum_bound!r}"
        elif self.status is Status.EXCLUDED:
            w = (f"norms never decay beyond n = {self.divergence_index} (ratio {self.divergence_ratio!r})"
                 if self.divergence_index is not None else self.note)
        else:
            w = self.note
        return f"{self.status.value} at lambda = {_fmt_complex(self.lam)}: {w}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{abs(z.imag)!r}i"


def _inflate(x: float, ops: int) -> float:
    # relative rounding budget for `ops` floating operations
    nu = 4 * (ops + 8) * _U
    return up(x * (1 + nu / (1 - nu)) + 1e-300 * ops)


# -- eigenvector profiles ------------------------------------------------------

@dataclass(frozen=True)
class EigenvectorProfile:
    lam: complex
    norms: dict
    forward_sum: object
    backward_sum: object


def eigen_profile(channel: WeightChannel, lam: complex, N: int) -> EigenvectorProfile:
    """Block norms ``|x_n|`` for ``|n| <= N`` with ``x_0 = 1``.

    Interval channels give interval norms with outward rounding; every
    weight selection inside the intervals has its norms enclosed.
    """
    rho = abs(complex(lam))
    if rho == 0:
        raise ZeroLambda("lambda must be nonzero")
    if N < 1:
        raise ValueError("profile length N must be >= 1")
    if channel.is_interval:
        one = Interval.point(1.0)
        r = Interval.point(rho)
        norms = {0: one}
        fs = bs = Interval.point(0.0)
        for n in range(1, N + 1):
            norms[n] = norms[n - 1] * channel.weight_at(n - 1) / r
            norms[-n] = norms[-n + 1] * r / channel.weight_at(-n)
            fs = fs + norms[n].square()
            bs = bs + norms[-n].square()
        return EigenvectorProfile(complex(lam), norms, fs, bs)
    norms = {0: 1.0}
    for n in range(1, N + 1):
        norms[n] = norms[n - 1] * channel.weight_at(n - 1) / rho
        norms[-n] = norms[-n + 1] * rho / channel.weight_at(-n)
    fs = math.fsum(norms[n] ** 2 for n in range(1, N + 1))
    bs = math.fsum(norms[-n] ** 2 for n in range(1, N + 1))
    return EigenvectorProfile(complex(lam), norms, fs, bs)


# -- geometric-mean limits -----------------------------------------------------

@dataclass(frozen=True)
class GeoMeans:
    forward: float
    backward: float
    exact: bool
    forward_range: tuple[float, float] | None = None
    backward_range: tuple[float, float] | None = None


def _growth_rate(values: np.ndarray) -> float:
    """exp of the least-squares slope of ``log(s_1 * ... * s_m)`` over the second half."""
    logp = np.cumsum(np.log(values))
    n = len(values)
    m = np.arange(n // 2, n, dtype=float) + 1
    y = logp[n // 2:]
    mc = m - m.mean()
    return float(np.exp(np.dot(mc, y - y.mean()) / np.dot(mc, mc)))


def numeric_geometric_means(channel: WeightChannel, n: int = 100_000) -> GeoMeans:
    """Estimate both limits from the first ``n`` weights of each side."""
    def est(side):
        if isinstance(side, IntervalSide):
            lo, hi = _growth_rate(side.lo.values(1, n + 1)), _growth_rate(side.hi.values(1, n + 1))
            return 0.5 * (lo + hi), (lo, hi)
        return _growth_rate(side.values(1, n + 1)), None

    f, fr = est(channel.forward)
    b, br = est(channel.backward)
    return GeoMeans(f, b, False, fr, br)


def geometric_mean_limits(channel: WeightChannel, numeric: bool = False, n: int = 100_000) -> GeoMeans:
    """Radii of the annulus carried by a channel.

    The analytic value is the limit of the side's regular law: the tail value,
    the per-period geometric mean, or the declared limit.  Interval channels
    report the limits of both endpoint sequences and are never exact.
    """
    if numeric:
        return numeric_geometric_means(channel, n)
    if channel.is_interval:
        f, b = channel.forward, channel.backward
        return GeoMeans(f.limit, b.limit, False, (f.lo.limit, f.hi.limit), (b.lo.limit, b.hi.limit))
    return GeoMeans(channel.forward_limit, channel.backward_limit, True)


# -- one-sided decisions -------------------------------------------------------

def _ratio(s, rho, direction):
    return s / rho if direction == "forward" else rho / s


def _periodic(side: Side, rho: float, direction: str, on_boundary: bool) -> SideResult:
    p = len(side.cycle)
    period_prod = math.prod(Fraction(v) for v in side.cycle)
    rho_p = Fraction(rho) ** p
    if on_boundary:
        q_exact = Fraction(1)
    else:
        q_exact = period_prod / rho_p if direction == "forward" else rho_p / period_prod
    if q_exact >= 1:
        idx = side.prefix if side.prefix else 1
        return SideResult("divergent", index=idx, ratio=float(q_exact), note="per-period growth factor >= 1")
    K = side.prefix
    s = side.values(1, K + p + 1)
    norms = np.cumprod(_ratio(s, rho, direction))
    sq = norms ** 2
    block = float(np.sum(sq[K:]))
    q = up(float(q_exact))
    tail = block * q * q / (1 - q * q)
    bound = _inflate(float(np.sum(sq)) + tail, K + p + 6)
    return SideResult("summable", bound=bound, terms=K + p, ratio=q, note="exact geometric tail over whole periods")


def _tele_sign(law: TelescopingRational, direction: str) -> int:
    # +1: non-geometric factor of the norms decays like 1/p; -1: grows like p
    e = -1 if law.invert else 1
    return e if direction == "forward" else -e


def _head_norms(side: Side, rho: float, direction: str) -> np.ndarray:
    if side.prefix == 0:
        return np.ones(0)
    return np.cumprod(_ratio(side.values(1, side.prefix + 1), rho, direction))


def _telescoping_divergence(side: Side, rho: float, direction: str, on_boundary: bool) -> SideResult | None:
    law = side.law
    c = law.scale
    a = Fraction(1) if on_boundary else (c / Fraction(rho) if direction == "forward" else Fraction(rho) / c)
    sigma = _tele_sign(law, direction)
    d = law.degree
    K = side.prefix
    if a < 1:
        return None
    if a == 1:
        if sigma == -1 or d == 0:
            return SideResult("divergent", index=K + 1, ratio=1.0, note="closed-form norms bounded below")
        return None
    if sigma == -1 or d == 0:
        return SideResult("divergent", index=K + 1, ratio=float(a), note="closed-form norms grow geometrically")
    # norms >= norm_K * a**j / (j+1)**d once p(j+1) <= p(1) (j+1)**d; find where that stays >= 1
    la = math.log(float(a)) if float(a) > 1 else float(a - 1)
    if la <= 0:
        return SideResult("unknown", note="growth factor indistinguishable from 1 in floating point")
    j = max(1, math.ceil(d / la))
    f = lambda j: j * la - d * math.log(j + 1) - 1e-12 * j
    lo = j
    while f(j) < 0:
        lo, j = j, 2 * j
        if j > 10 ** 300:
            return SideResult("unknown", note="divergence certificate index overflow")
    hi = j
    while lo < hi:
        mid = (lo + hi) // 2
        if mid >= max(1, math.ceil(d / la)) and f(mid) >= 0:
            hi = mid
        else:
            lo = mid + 1
    return SideResult("divergent", index=K + hi, ratio=float(a), note="a**j / (j+1)**d >= 1 from here on")


def _telescoping_boundary_sum(side: Side, rho: float, direction: str, budget: Budget) -> SideResult:
    law = side.law
    K = side.prefix
    M = max(1, min(EXACT_TERMS, budget.n_max))
    p1 = law.p(1)
    exact = Fraction(0)
    for j in range(1, M + 1):
        exact += Fraction(p1 * p1, law.p(j + 1) ** 2)
    d = law.degree
    tail = Fraction(p1, law.leading) ** 2 * Fraction(2, 2 * M + 3) ** (2 * d - 1) / (2 * d - 1)
    law_sum = round_up(exact + tail)
    head = _head_norms(side, rho, direction)
    nK = float(head[-1]) if K else 1.0
    total = float(np.sum(head ** 2)) + nK * nK * law_sum
    return SideResult("summable", bound=_inflate(total, K + 4), terms=K + M,
                      note=f"exact rational sum of {M} terms plus integral tail")


def _tail_ratio_fn(side: Side, rho: float, direction: str, on_boundary: bool):
    """Return ``q(ks, s_next)``: a sup of norm ratios beyond index k, or None if no decay is possible."""
    K = side.prefix
    if isinstance(side.law, TelescopingRational):
        law = side.law
        c = law.scale
        a = c / Fraction(rho) if direction == "forward" else Fraction(rho) / c
        if on_boundary or a >= 1:
            return None
        af = up(float(a))
        grow = _tele_sign(law, direction) == -1
        d = law.degree

        def q(ks, s_next):
            j = ks - K
            out = np.full(len(ks), af)
            if grow:
                out = out * ((j + 2) / np.maximum(j + 1, 1)) ** d
            out[j < 0] = np.inf
            return out
        return q

    L, trend = side.limit, side.trend
    if on_boundary:
        return None
    if direction == "forward" and not rho > L:
        return None
    if direction == "backward" and not rho < L:
        return None

    def q(ks, s_next):
        if direction == "forward":
            out = (s_next if trend == "decreasing" else np.full(len(ks), L)) / rho
        else:
            out = rho / (np.full(len(ks), L) if trend == "decreasing" else s_next)
        out = np.array(out, dtype=float)
        out[ks < K] = np.inf
        return out
    return q


def _sum_scan(side: Side, rho: float, direction: str, q_fn, budget: Budget) -> SideResult | None:
    """Partial sums with a geometric tail bound; first bound meeting the precision wins."""
    carry_norm, carry_sum, done = 1.0, 0.0, 0
    chunk = 1024
    best = None
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        while done < budget.n_max:
            stop = min(done + chunk, budget.n_max)
            s = side.values(done + 1, stop + 2)
            cur, nxt = s[:-1], s[1:]
            norms = carry_norm * np.cumprod(_ratio(cur, rho, direction))
            sums = carry_sum + np.cumsum(norms ** 2)
            ks = np.arange(done + 1, stop + 1)
            q = q_fn(ks, nxt)
            tail = np.where(q < 1, norms ** 2 * q ** 2 / (1 - q ** 2), np.inf)
            total = sums + tail
            ok = np.isfinite(total)
            if ok.any():
                good = ok & (tail <= budget.precision * np.maximum(1.0, sums))
                if good.any():
                    i = int(np.argmax(good))
                    return SideResult("summable", bound=_inflate(float(total[i]), 4 * int(ks[i])),
                                      terms=int(ks[i]), ratio=float(q[i]), note="geometric tail bound")
                masked = np.where(ok, total, np.inf)
                i = int(np.argmin(masked))
                if best is None or masked[i] < best[0]:
                    best = (float(masked[i]), int(ks[i]), float(q[i]))
            carry_norm, carry_sum, done = float(norms[-1]), float(sums[-1]), stop
            if not (math.isfinite(carry_norm) and math.isfinite(carry_sum)):
                break
            chunk *= 2
    if best is None:
        return None
    return SideResult("summable", bound=_inflate(best[0], 4 * best[1]), terms=best[1], ratio=best[2],
                      note="geometric tail bound (precision target not reached within budget)")


def _monotone_divergence(side: Side, rho: float, direction: str, on_boundary: bool, budget: Budget) -> SideResult | None:
    L, trend, K = side.limit, side.trend, side.prefix
    idx = max(K, 1)
    if direction == "forward":
        if trend == "decreasing":
            # every regular weight exceeds L >= rho
            if on_boundary or rho <= L:
                return SideResult("divergent", index=idx, ratio=L / rho if not on_boundary else 1.0,
                                  note="weights stay above |lambda|")
            return None
        if on_boundary or not rho < L:
            return None
        hit = lambda s: s >= rho
    else:
        if trend == "increasing":
            if on_boundary or rho >= L:
                return SideResult("divergent", index=idx, ratio=rho / L if not on_boundary else 1.0,
                                  note="weights stay below |lambda|")
            return None
        if on_boundary or not rho > L:
            return None
        hit = lambda s: s <= rho
    done, chunk = K, 1024
    while done < budget.n_max:
        stop = min(done + chunk, budget.n_max)
        s = side.values(done + 1, stop + 1)
        h = hit(s)
        if h.any():
            i = int(np.argmax(h))
            k = done + i  # weights from index k+1 on are beyond |lambda|
            ratio = float(_ratio(s[i], rho, direction))
            return SideResult("divergent", index=max(k, 1), ratio=ratio, note="monotone weights beyond |lambda|")
        done, chunk = stop, chunk * 2
    return None


def _divergence(side: Side, rho: float, direction: str, on_boundary: bool, budget: Budget) -> SideResult | None:
    kind = side.kind
    if kind == "periodic":
        r = _periodic(side, rho, direction, on_boundary)
        return r if r.status == "divergent" else None
    if kind == "telescoping":
        r = _telescoping_divergence(side, rho, direction, on_boundary)
        return r if r is not None and r.status == "divergent" else None
    return _monotone_divergence(side, rho, direction, on_boundary, budget)


def _summability(side: Side, rho: float, direction: str, on_boundary: bool, budget: Budget) -> SideResult | None:
    kind = side.kind
    if kind == "periodic":
        r = _periodic(side, rho, direction, on_boundary)
        return r if r.status == "summable" else None
    if kind == "telescoping":
        law = side.law
        a_is_one = on_boundary or law.scale == Fraction(rho)
        if a_is_one:
            if _tele_sign(law, direction) == 1 and law.degree >= 1:
                return _telescoping_boundary_sum(side, rho, direction, budget)
            return None
    q_fn = _tail_ratio_fn(side, rho, direction, on_boundary)
    if q_fn is None:
        return None
    return _sum_scan(side, rho, direction, q_fn, budget)


def decide_side(side, rho: float, direction: str, budget: Budget, on_boundary: bool = False) -> SideResult:
    """Decide summability of one half of the eigenvector norms at modulus ``rho``."""
    if isinstance(side, IntervalSide):
        # upper norm bounds come from the large forward / small backward weights
        up_side, low_side = (side.hi, side.lo) if direction == "forward" else (side.lo, side.hi)
    else:
        up_side = low_side = side
    res = _divergence(low_side, rho, direction, on_boundary, budget)
    if res is not None:
        return res
    res = _summability(up_side, rho, direction, on_boundary, budget)
    if res is not None:
        return res
    if on_boundary:
        note = "boundary circle of a monotone side without closed-form products"
    else:
        note = f"no certificate within {budget.n_max} terms"
    return SideResult("unknown", terms=budget.n_max, note=note)


def _snap(rho: float, limit: float) -> tuple[float, bool]:
    if abs(rho - limit) <= SNAP_ULPS * math.ulp(limit):
        return limit, True
    return rho, False


def classify_membership(channel: WeightChannel, lam, budget: Budget | None = None) -> MembershipVerdict:
    """Certified decision whether ``lam`` is an eigenvalue of the channel's shift."""
    budget = budget or Budget()
    lam = complex(lam)
    rho = abs(lam)
    if rho == 0:
        raise ZeroLambda("lambda must be nonzero")
    rf, bf = _snap(rho, channel.forward_limit)
    rb, bb = _snap(rho, channel.backward_limit)
    fwd = decide_side(channel.forward, rf, "forward", budget, bf)
    if fwd.status == "divergent":
        return MembershipVerdict(Status.EXCLUDED, lam, divergence_index=fwd.index,
                                 divergence_ratio=fwd.ratio, terms=fwd.terms, note=fwd.note)
    bwd = decide_side(channel.backward, rb, "backward", budget, bb)
    if bwd.status == "divergent":
        return MembershipVerdict(Status.EXCLUDED, lam, divergence_index=-bwd.index,
                                 divergence_ratio=bwd.ratio, terms=bwd.terms, note=bwd.note)
    if fwd.status == "summable" and bwd.status == "summable":
        total = up(up(1.0 + fwd.bound) + bwd.bound)
        return MembershipVerdict(Status.IN, lam, sum_bound=total, terms=fwd.terms + bwd.terms,
                                 note=f"forward: {fwd.note}; backward: {bwd.note}")
    notes = [f"{name}: {r.note}" for name, r in (("forward", fwd), ("backward", bwd)) if r.status == "unknown"]
    return MembershipVerdict(Status.UNDETERMINED, lam, terms=fwd.terms + bwd.terms, note="; ".join(notes))


def classify_model(model: Model, lam, budget: Budget | None = None) -> MembershipVerdict:
    """Membership in the point spectrum of the whole model (union over its parts)."""
    budget = budget or Budget()
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("lambda must be nonzero")
    for z in model.discrete_points:
        if abs(lam - z) <= 1e-12 * max(1.0, abs(z)):
            return MembershipVerdict(Status.IN, lam, sum_bound=1.0, note=f"eigenvalue {_fmt_complex(z)} of the diagonal part")
    verdicts = [classify_membership(ch, lam, budget) for ch in model.channels]
    for v in verdicts:
        if v.status is Status.IN:
            return v
    undetermined = [v for v in verdicts if v.status is Status.UNDETERMINED]
    if undetermined:
        return undetermined[0]
    if verdicts:
        return verdicts[0]
    return MembershipVerdict(Status.EXCLUDED, lam, note="not an eigenvalue of the diagonal part")


# -- regions -------------------------------------------------------------------

@dataclass(frozen=True)
class AnnulusRegion:
    """``{inner <= |z| <= outer}`` with each boundary circle in or out.

    ``None`` for a closed flag means the boundary circle could not be
    decided.  ``empty`` marks channels whose limits leave no room (inner
    limit at or beyond the outer one with the circle itself excluded).
    """

    inner_radius: float
    outer_radius: float
    inner_closed: Optional[bool]
    outer_closed: Optional[bool]
    degenerate_circle: bool = False
    empty: bool = False

    def __post_init__(self):
        if self.inner_radius > self.outer_radius:
            raise ValueError("inner radius exceeds outer radius")
        if self.degenerate_circle and not (self.inner_closed or self.outer_closed):
            raise ValueError("a degenerate circle region must include its circle")

    def contains(self, z) -> Optional[bool]:
        if self.empty:
            return False
        r = abs(complex(z))
        if self.inner_radius < r < self.outer_radius:
            return True
        if r == self.inner_radius:
            return self.inner_closed
        if r == self.outer_radius:
            return self.outer_closed
        return False


UNION_NOTE = ("certified subset of the point spectrum, hence of the Schauder spectrum "
              "(sigma_p is contained in sigma_S); residual spectrum not computed")


@dataclass(frozen=True)
class RegionReport:
    shift_regions: tuple[AnnulusRegion, ...]
    discrete_points: tuple[complex, ...]
    union_note: str = UNION_NOTE


def channel_region(channel: WeightChannel, budget: Budget | None = None) -> AnnulusRegion:
    budget = budget or Budget()
    g = geometric_mean_limits(channel)
    gf, gb = g.forward, g.backward

    def closed(r):
        st = classify_membership(channel, r, budget).status
        return None if st is Status.UNDETERMINED else st is Status.IN

    if gf > gb:
        return AnnulusRegion(gb, gf, False, False, empty=True)
    if gf == gb:
        c = closed(gf)
        if c:
            return AnnulusRegion(gf, gb, True, True, degenerate_circle=True)
        return AnnulusRegion(gf, gb, c, c, empty=c is False)
    return AnnulusRegion(gf, gb, closed(gf), closed(gb))


def model_region(model: Model, budget: Budget | None = None) -> RegionReport:
    """Predicted point spectrum: one annulus per channel plus the diagonal eigenvalues."""
    regions = tuple(channel_region(ch, budget) for ch in model.channels)
    return RegionReport(regions, tuple(model.discrete_points))


# -- the summability condition for a single accumulation point -----------------

@dataclass(frozen=True)
class ConditionReport:
    forward_status: str
    forward_sum_bound: Optional[float]
    backward_status: str
    backward_sum_bound: Optional[float]

    @property
    def satisfied(self) -> bool:
        return self.forward_status == "finite" and self.backward_status == "finite"


_CONDITION_STATUS = {"summable": "finite", "divergent": "divergent", "unknown": "undetermined"}


def boundary_condition(t_seq: SequenceSpec, r_seq: SequenceSpec, lambda1: float,
                       budget: Budget | None = None) -> ConditionReport:
    """Decide ``sum_n prod_{k<=n} (t_k/lambda1)^2`` and ``sum_n prod_{k<=n} (lambda1/r_k)^2``.

    ``t`` must approach lambda1 from below without decreasing and ``r`` from
    above without increasing.
    """
    budget = budget or Budget()
    tv, rv = check_positive(t_seq), check_positive(r_seq)
    if np.any(np.diff(tv) < 0) or np.any(tv >= lambda1):
        raise MonotonicityViolation("t must be nondecreasing and stay strictly below lambda1")
    if np.any(np.diff(rv) > 0) or np.any(rv <= lambda1):
        raise MonotonicityViolation("r must be nonincreasing and stay strictly above lambda1")
    fwd_side, bwd_side = Side.from_sequence(t_seq), Side.from_sequence(r_seq)
    rf, bf = _snap(float(lambda1), fwd_side.limit)
    rb, bb = _snap(float(lambda1), bwd_side.limit)
    f = decide_side(fwd_side, rf, "forward", budget, bf)
    b = decide_side(bwd_side, rb, "backward", budget, bb)
    return ConditionReport(_CONDITION_STATUS[f.status], f.bound, _CONDITION_STATUS[b.status], b.bound)


# -- polar grids ---------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    radial_samples: int
    angular_samples: int

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max) or not math.isfinite(self.r_max):
            raise BadGrid(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.radial_samples < 1 or self.angular_samples < 1:
            raise BadGrid("sample counts must be >= 1")

    def radii(self) -> np.ndarray:
        if self.radial_samples == 1:
            return np.array([self.r_min])
        return np.linspace(self.r_min, self.r_max, self.radial_samples)

    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.angular_samples) / self.angular_samples


@dataclass(frozen=True)
class GridRow:
    r: float
    theta: float
    status: Status
    witness: float


@dataclass(frozen=True)
class GridResult:
    rows: tuple[GridRow, ...]
    spec: GridSpec

    @property
    def counts(self) -> dict[Status, int]:
        out = {s: 0 for s in Status}
        for row in self.rows:
            out[row.status] += 1
        return out


def _grid_point(args):
    model, r, theta, budget = args
    lam = complex(r * math.cos(theta), r * math.sin(theta))
    v = classify_model(model, lam, budget)
    return GridRow(float(r), float(theta), v.status, float(v.witness_value))


def grid_classify(model: Model, grid: GridSpec, budget: Budget | None = None,
                  executor: Executor | None = None) -> GridResult:
    """Classify every point of a polar grid; rows come out radius-major regardless of evaluation order."""
    budget = budget or Budget()
    tasks = [(model, r, t, budget) for r in grid.radii() for t in grid.thetas()]
    rows = executor.map(_grid_point, tasks) if executor is not None else map(_grid_point, tasks)
    return GridResult(tuple(rows), grid)
