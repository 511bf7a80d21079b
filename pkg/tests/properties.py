"""Property checks shared by the hypothesis suite and the acceptance run.

Each ``check_*`` function takes plain parameters, raises AssertionError on
a violation, and returns nothing.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from spread_spectra.analysis import Status, channel_region, classify_membership, eigen_profile
from spread_spectra.model import PRESETS, build_model

from oracles import brute_force_verdict

SHIFT_PRESETS = tuple(sorted(n for n in PRESETS if build_model(PRESETS[n]).channels))
DUALITY_PRESETS = ("two-point", "periodic-1111", "periodic-2112", "periodic-3113")
ULP_REL = 2.0 ** -51


@lru_cache(maxsize=None)
def preset_channel(name: str):
    return build_model(PRESETS[name]).channels[0]


def _radii(ch) -> tuple[float, float]:
    return ch.forward_limit, ch.backward_limit


def away_from_radii(ch, rho: float, rel: float) -> bool:
    return all(abs(rho - g) > rel * g for g in _radii(ch))


def check_rotation(name: str, rho: float, theta: float) -> None:
    ch = preset_channel(name)
    a = classify_membership(ch, rho * cmath.exp(1j * theta))
    b = classify_membership(ch, rho)
    assert a.status is b.status, (name, rho, theta, a, b)
    if a.status is Status.IN:
        # |rho * e^{i theta}| differs from rho in the last bits
        assert math.isclose(a.sum_bound, b.sum_bound, rel_tol=1e-12)


def check_scaling(name: str, rho: float, c: float) -> None:
    ch = preset_channel(name)
    a = classify_membership(ch, rho)
    b = classify_membership(ch.scaled(c), rho * c)
    assert a.status is b.status, (name, rho, c, a, b)
    if a.status is Status.IN:
        assert math.isclose(a.sum_bound, b.sum_bound, rel_tol=1e-9), (a.sum_bound, b.sum_bound)
    elif a.status is Status.EXCLUDED:
        assert math.isclose(a.divergence_ratio, b.divergence_ratio, rel_tol=1e-9)


def check_duality(name: str, rho: float) -> None:
    ch = preset_channel(name)
    inv = ch.inverted()
    reg, ireg = channel_region(ch), channel_region(inv)
    assert math.isclose(ireg.inner_radius, 1 / reg.outer_radius, rel_tol=1e-12)
    assert math.isclose(ireg.outer_radius, 1 / reg.inner_radius, rel_tol=1e-12)
    assert (ireg.inner_closed, ireg.outer_closed, ireg.empty) == (reg.outer_closed, reg.inner_closed, reg.empty)
    assert classify_membership(ch, rho).status is classify_membership(inv, 1 / rho).status


def check_recurrence(name: str, lam: complex, N: int) -> None:
    ch = preset_channel(name)
    rho = abs(lam)
    if ch.is_interval:
        prof = eigen_profile(ch, lam, N)
        rng = np.random.default_rng(abs(hash((name, N))) % 2 ** 32)
        for _ in range(10):
            x = {0: 1.0}
            for n in range(1, N + 1):
                wf, wb = ch.weight_at(n - 1), ch.weight_at(-n)
                x[n] = x[n - 1] * rng.uniform(wf.lo, wf.hi) / rho
                x[-n] = x[-n + 1] * rho / rng.uniform(wb.lo, wb.hi)
            for n, v in x.items():
                assert prof.norms[n].lo <= v <= prof.norms[n].hi, (name, n)
        return
    prof = eigen_profile(ch, lam, N)
    assert prof.norms[0] == 1.0
    for n in range(1, N + 1):
        lhs, rhs = prof.norms[n] * rho, prof.norms[n - 1] * ch.weight_at(n - 1)
        assert math.isclose(lhs, rhs, rel_tol=ULP_REL), (name, n, lhs, rhs)
        lhs, rhs = prof.norms[-n] * ch.weight_at(-n), prof.norms[-n + 1] * rho
        assert math.isclose(lhs, rhs, rel_tol=ULP_REL), (name, -n, lhs, rhs)


def check_oracle(name: str, rho: float) -> None:
    ch = preset_channel(name)
    got = classify_membership(ch, rho).status
    brute = brute_force_verdict(ch, rho)
    expected = {"In": Status.IN, "Out": Status.EXCLUDED}[brute]
    assert got is expected, (name, rho, got, brute)
