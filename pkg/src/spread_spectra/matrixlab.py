"""Finite-dimensional checks of the shift models.

Finite sections of a weighted shift are nilpotent, so their eigenvalues say
nothing about the infinite operator.  Instead, the truncated eigenvector
profile is plugged back into a slightly larger section and its residual is
measured.  The random ``U @ A`` experiments check annulus containment and
boundary-circle cardinality for finite unitary-times-positive matrices.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .channels import WeightChannel
from .errors import BadKernelDims, DimensionTooLarge, NoShiftPart, OutsideInterior, ZeroLambda
from .model import Model

MAX_DENSE_DIM = 256
BOUNDARY_TOL = 1e-8


class Structure(str, Enum):
    DENSE = "Dense"
    BLOCK_SHIFT_BANDED = "BlockShiftBanded"
    DIAGONAL = "Diagonal"


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Square complex matrix, dense or stored by diagonals.

    Banded storage maps an offset ``col - row`` to the array of entries on
    that diagonal, so offset ``-K`` holds ``M[i + K, i]``.
    """

    dim: int
    structure: Structure
    dense: Optional[np.ndarray] = None
    diagonals: Optional[dict[int, np.ndarray]] = None

    def __post_init__(self):
        if (self.dense is None) == (self.diagonals is None):
            raise ValueError("give exactly one of dense or diagonals")
        if self.dense is not None:
            d = np.asarray(self.dense, dtype=complex)
            if d.shape != (self.dim, self.dim):
                raise ValueError(f"dense storage has shape {d.shape}, expected {(self.dim, self.dim)}")
            object.__setattr__(self, "dense", d)
        else:
            diags = {}
            for off, vals in self.diagonals.items():
                v = np.asarray(vals, dtype=complex)
                if len(v) != self.dim - abs(off):
                    raise ValueError(f"diagonal {off} needs {self.dim - abs(off)} entries, got {len(v)}")
                diags[int(off)] = v
            object.__setattr__(self, "diagonals", diags)

    @classmethod
    def from_dense(cls, a, structure: Structure = Structure.DENSE) -> ComplexMatrix:
        a = np.asarray(a, dtype=complex)
        return cls(a.shape[0], structure, dense=a)

    @classmethod
    def diagonal(cls, entries) -> ComplexMatrix:
        e = np.asarray(entries, dtype=complex)
        return cls(len(e), Structure.DIAGONAL, diagonals={0: e})

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense.copy()
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for off, vals in self.diagonals.items():
            idx = np.arange(len(vals))
            if off >= 0:
                out[idx, idx + off] = vals
            else:
                out[idx - off, idx] = vals
        return out

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if self.dense is not None:
            return self.dense @ x
        y = np.zeros(self.dim, dtype=complex)
        for off, vals in self.diagonals.items():
            n = len(vals)
            if off >= 0:
                y[:n] += vals * x[off:off + n]
            else:
                y[-off:-off + n] += vals * x[:n]
        return y

    def triplets(self) -> list[tuple[int, int, complex]]:
        """Nonzero entries as ``(row, col, value)`` in row-major order."""
        a = self.to_dense()
        rows, cols = np.nonzero(a)
        return [(int(r), int(c), complex(a[r, c])) for r, c in zip(rows, cols)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("row,col,re,im\n")
        for r, c, v in self.triplets():
            buf.write(f"{r},{c},{v.real!r},{v.imag!r}\n")
        return buf.getvalue()


# -- finite sections -----------------------------------------------------------

def block_index(n: int, k: int, N: int, K: int) -> int:
    """Row/column of basis vector ``e_k^(n)`` in a section with ``|n| <= N`` and ``K`` channels."""
    return (n + N) * K + k


def _section(channels: Sequence[WeightChannel], N: int, extra_diag=()) -> ComplexMatrix:
    K = len(channels)
    n_shift = (2 * N + 1) * K
    dim = n_shift + len(extra_diag)
    sub = np.zeros(dim - K, dtype=complex)
    for k, ch in enumerate(channels):
        ch = ch.midpoint()
        for n in range(-N, N):
            sub[block_index(n, k, N, K)] = ch.weight_at(n)
    diagonals = {-K: sub}
    if len(extra_diag):
        diag = np.zeros(dim, dtype=complex)
        diag[n_shift:] = extra_diag
        diagonals[0] = diag
    return ComplexMatrix(dim, Structure.BLOCK_SHIFT_BANDED, diagonals=diagonals)


def truncate_model(model: Model, N: int, K: int) -> ComplexMatrix:
    """Finite section on ``|n| <= N`` of the first ``K`` channels, diagonal part appended last.

    ``T e_k^(n) = w^k_n e_k^(n+1)`` for ``n < N`` and ``T e_k^(N) = 0``;
    interval channels use midpoint weights.
    """
    if not model.channels:
        raise NoShiftPart("model has no shift part to truncate")
    if N < 1 or K < 1:
        raise ValueError("N and K must be >= 1")
    if K > len(model.channels):
        raise ValueError(f"model has {len(model.channels)} channel(s), asked for {K}")
    return _section(model.channels[:K], N, model.discrete_points)


# -- residuals -----------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    lam: complex
    levels: tuple[int, ...]
    residual_norms: tuple[float, ...]
    matrix_residuals: tuple[float, ...]
    predicted_ratio: float
    observed_ratios: tuple[float, ...]


def _profile(channel: WeightChannel, lam: complex, N: int) -> np.ndarray:
    """Complex eigenvector entries ``x_n`` for ``|n| <= N`` with ``x_0 = 1``."""
    x = np.zeros(2 * N + 1, dtype=complex)
    x[N] = 1.0
    for n in range(1, N + 1):
        x[N + n] = x[N + n - 1] * channel.weight_at(n - 1) / lam
        x[N - n] = x[N - n + 1] * lam / channel.weight_at(-n)
    return x


def closed_form_residual(channel: WeightChannel, lam: complex, N: int) -> float:
    x = _profile(channel, lam, N)
    return math.hypot(abs(lam * x[0]), abs(channel.weight_at(N) * x[-1]))


def matrix_residual(channel: WeightChannel, lam: complex, N: int) -> float:
    """``||(lam I - T) x||`` with the profile zero-padded into the ``N + 1`` section."""
    x = np.zeros(2 * N + 3, dtype=complex)
    x[1:-1] = _profile(channel, lam, N)
    t = _section([channel], N + 1)
    return float(np.linalg.norm(lam * x - t.matvec(x)))


def residual_report(channel: WeightChannel, lam, levels: Sequence[int]) -> ResidualReport:
    """Residuals of truncated eigenvector profiles, by closed form and by explicit matrix action."""
    lam = complex(lam)
    rho = abs(lam)
    if rho == 0:
        raise ZeroLambda("lambda must be nonzero")
    ch = channel.midpoint()
    gf, gb = ch.forward_limit, ch.backward_limit
    if not gf < rho < gb:
        raise OutsideInterior(f"|lambda| = {rho!r} is not strictly between {gf!r} and {gb!r}")
    levels = tuple(int(n) for n in levels)
    if not levels or any(n < 1 for n in levels):
        raise ValueError("levels must be a nonempty list of positive integers")
    closed = tuple(closed_form_residual(ch, lam, n) for n in levels)
    direct = tuple(matrix_residual(ch, lam, n) for n in levels)
    ratios = [math.nan]
    for i in range(1, len(levels)):
        step = levels[i] - levels[i - 1]
        if step <= 0 or closed[i - 1] == 0:
            ratios.append(math.nan)
        else:
            ratios.append((closed[i] / closed[i - 1]) ** (1.0 / step))
    q = max(gf / rho, rho / gb)
    return ResidualReport(lam, levels, closed, direct, q, tuple(ratios))


# -- dense eigenvalues ---------------------------------------------------------

def eig_dense(matrix) -> list[complex]:
    """All eigenvalues of a matrix of dimension at most 256 (LAPACK via numpy)."""
    a = matrix.to_dense() if isinstance(matrix, ComplexMatrix) else np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DENSE_DIM:
        raise DimensionTooLarge(f"dimension {a.shape[0]} exceeds {MAX_DENSE_DIM}")
    if a.shape[0] == 0:
        return []
    return [complex(z) for z in np.linalg.eigvals(a)]


# -- random experiments --------------------------------------------------------

def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """QR of a complex Gaussian matrix with the phases of R's diagonal folded back into Q."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _positive_diagonal(rng, dim, lambda1, lambda2, d1, d2) -> np.ndarray:
    inner = rng.uniform(lambda1, lambda2, dim - d1 - d2)
    while np.any((inner <= lambda1) | (inner >= lambda2)):
        bad = (inner <= lambda1) | (inner >= lambda2)
        inner[bad] = rng.uniform(lambda1, lambda2, int(bad.sum()))
    return np.concatenate([np.full(d1, float(lambda1)), np.full(d2, float(lambda2)), inner])


def _random_unit(rng, dim) -> np.ndarray:
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return x / np.linalg.norm(x)


def positivity_excess(a: np.ndarray, x: np.ndarray, lambda1: float) -> float:
    """``||(lambda1 I - A) x||^2 - (||A x||^2 - lambda1^2 ||x||^2)``; nonpositive when ``A >= lambda1``."""
    ax = a @ x
    lhs = np.linalg.norm(lambda1 * x - ax) ** 2
    rhs = np.linalg.norm(ax) ** 2 - lambda1 ** 2 * np.linalg.norm(x) ** 2
    return float(lhs - rhs)


@dataclass(frozen=True)
class TrialRow:
    trial: int
    max_excess: float
    containment_violation: bool
    boundary_violations: int
    positivity_violations: int


@dataclass(frozen=True)
class LabReport:
    trials: int
    max_modulus_excess: float
    containment_violations: int
    boundary_count_violations: int
    positivity_violations: int
    rows: tuple[TrialRow, ...]


UnitaryHook = Callable[[np.random.Generator, int], np.ndarray]


def _lab_trial(args) -> TrialRow:
    index, seed_seq, dim, lambda1, lambda2, d1, d2, unitary, tol, samples = args
    rng = np.random.default_rng(seed_seq)
    diag = _positive_diagonal(rng, dim, lambda1, lambda2, d1, d2)
    u = unitary(rng, dim)
    ua = u * diag  # U @ diag(diag)
    mods = np.abs(eig_dense(ua))
    excess = float(max(mods.max() - lambda2, lambda1 - mods.min()))
    on1 = int(np.sum(np.abs(mods - lambda1) <= tol))
    on2 = int(np.sum(np.abs(mods - lambda2) <= tol))
    boundary = int(on1 > d1) + int(on2 > d2)
    a = np.diag(diag.astype(complex))
    hits = sum(positivity_excess(a, _random_unit(rng, dim), lambda1) > tol for _ in range(samples))
    return TrialRow(index, excess, excess > tol, boundary, int(hits))


def finite_lab_run(dim: int, lambda1: float, lambda2: float, kernel_dims: tuple[int, int], trials: int,
                   seed: int, unitary: UnitaryHook | None = None, tol: float = BOUNDARY_TOL,
                   positivity_samples: int = 4, executor: Executor | None = None) -> LabReport:
    """Seeded ``U @ A`` trials; ``A`` is diagonal with ``d1`` copies of lambda1, ``d2`` of lambda2.

    Each trial draws from its own spawned seed, so the report does not depend
    on evaluation order.  ``unitary`` replaces the random unitary (e.g. an
    identity hook for hand-checkable runs).
    """
    d1, d2 = (int(d) for d in kernel_dims)
    if d1 < 0 or d2 < 0 or d1 + d2 > dim:
        raise BadKernelDims(f"kernel dims ({d1}, {d2}) do not fit in dimension {dim}")
    if not 0 < lambda1 < lambda2:
        raise ValueError("need 0 < lambda1 < lambda2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if dim > MAX_DENSE_DIM:
        raise DimensionTooLarge(f"dimension {dim} exceeds {MAX_DENSE_DIM}")
    unitary = unitary or random_unitary
    children = np.random.SeedSequence(seed).spawn(trials)
    tasks = [(i, children[i], dim, float(lambda1), float(lambda2), d1, d2, unitary, tol, positivity_samples)
             for i in range(trials)]
    rows = tuple(executor.map(_lab_trial, tasks) if executor is not None else map(_lab_trial, tasks))
    return LabReport(
        trials=trials,
        max_modulus_excess=max(r.max_excess for r in rows),
        containment_violations=sum(r.containment_violation for r in rows),
        boundary_count_violations=sum(r.boundary_violations for r in rows),
        positivity_violations=sum(r.positivity_violations for r in rows),
        rows=rows,
    )


@dataclass(frozen=True)
class PositivityReport:
    pairs: int
    violations: int
    max_excess: float


def positivity_trials(pairs: int, dim: int, lambda1: float, lambda2: float, seed: int,
                   tol: float = 1e-10) -> PositivityReport:
    """Random self-adjoint ``A`` with spectrum in ``[lambda1, lambda2]`` and random ``x``."""
    rng = np.random.default_rng(seed)
    worst, bad = -math.inf, 0
    for _ in range(pairs):
        v = random_unitary(rng, dim)
        a = (v * rng.uniform(lambda1, lambda2, dim)) @ v.conj().T
        a = 0.5 * (a + a.conj().T)
        x = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) * rng.uniform(0.1, 10.0)
        e = positivity_excess(a, x, lambda1)
        worst = max(worst, e)
        bad += e > tol
    return PositivityReport(pairs, int(bad), worst)
