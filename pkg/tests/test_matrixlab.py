import numpy as np
import pytest

from spread_spectra.errors import BadKernelDims, DimensionTooLarge, NoShiftPart, OutsideInterior
from spread_spectra.matrixlab import (
    ComplexMatrix,
    Structure,
    block_index,
    closed_form_residual,
    eig_dense,
    finite_lab_run,
    positivity_excess,
    positivity_trials,
    matrix_residual,
    random_unitary,
    residual_report,
    truncate_model,
)
from spread_spectra.model import PRESETS, Model, build_model, build_prescribed_circles

from oracles import cubic_roots


def model(name):
    return build_model(PRESETS[name])


def test_two_point_section():
    t = truncate_model(model("two-point"), 1, 1)
    assert t.structure is Structure.BLOCK_SHIFT_BANDED
    assert np.array_equal(t.to_dense(), [[0, 0, 0], [1, 0, 0], [0, 2, 0]])


def test_section_is_nilpotent():
    t = truncate_model(model("periodic-2112"), 6, 1)
    assert np.allclose(np.linalg.matrix_power(t.to_dense(), t.dim), 0)
    assert max(abs(z) for z in eig_dense(t)) < 1e-6


def test_combined_diagonal_block():
    t = truncate_model(model("combined"), 2, 1)
    d = t.to_dense()
    shift = 5
    assert np.array_equal(np.diag(d)[shift:], [1j, -2])
    block = ComplexMatrix.from_dense(d[shift:, shift:])
    assert sorted(eig_dense(block), key=lambda z: z.real) == [-2, 1j]


def test_truncate_errors():
    with pytest.raises(NoShiftPart):
        truncate_model(Model(diagonal_part=build_prescribed_circles(1, 2, [1j], [])), 3, 1)
    with pytest.raises(ValueError):
        truncate_model(model("two-point"), 3, 2)


def test_block_index_layout():
    assert block_index(-2, 0, 2, 3) == 0
    assert block_index(0, 1, 2, 3) == 7
    assert block_index(2, 2, 2, 3) == 14


def test_banded_roundtrip_and_matvec():
    rng = np.random.default_rng(3)
    diags = {0: rng.normal(size=6) + 1j, -2: rng.normal(size=4), 1: 1j * rng.normal(size=5)}
    m = ComplexMatrix(6, Structure.BLOCK_SHIFT_BANDED, diagonals=diags)
    dense = m.to_dense()
    for off, vals in diags.items():
        assert np.array_equal(np.diagonal(dense, off), vals)
    x = rng.normal(size=6) + 1j * rng.normal(size=6)
    assert np.allclose(m.matvec(x), dense @ x, rtol=0, atol=1e-14)


def test_matrix_csv():
    text = truncate_model(model("two-point"), 1, 1).to_csv()
    assert text == "row,col,re,im\n1,0,1.0,0.0\n2,1,2.0,0.0\n"


def test_residual_two_point():
    rep = residual_report(model("two-point").channels[0], 1.5, [10, 20, 40])
    assert rep.predicted_ratio == 0.75
    assert np.isnan(rep.observed_ratios[0])
    for q in rep.observed_ratios[1:]:
        assert abs(q - 0.75) < 0.01
    for a, b in zip(rep.residual_norms, rep.matrix_residuals):
        assert abs(a - b) <= 1e-12 * a


def test_residual_rotation_invariant():
    ch = model("two-point").channels[0]
    a = residual_report(ch, 1.5, [10, 20, 40])
    b = residual_report(ch, 1.5j, [10, 20, 40])
    assert a.residual_norms == pytest.approx(b.residual_norms, rel=1e-14)


def test_residual_outside_interior():
    with pytest.raises(OutsideInterior):
        residual_report(model("two-point").channels[0], 2.5, [10])


@pytest.mark.parametrize("name", ["two-point", "periodic-2112", "periodic-3113", "accumulating-open",
                                  "accumulating-closed", "interval"])
def test_closed_form_residual_matches_matrix(name):
    ch = model(name).channels[0]
    rng = np.random.default_rng(11)
    g = ch.midpoint()
    for _ in range(20):
        r = rng.uniform(g.forward_limit, g.backward_limit)
        lam = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
        n = int(rng.integers(1, 30))
        a, b = closed_form_residual(g, lam, n), matrix_residual(g, lam, n)
        assert abs(a - b) <= 1e-12 * a


def test_eig_dense_small_cases():
    assert sorted(eig_dense(ComplexMatrix.diagonal([1, 2])), key=abs) == [1, 2]
    ev = sorted(eig_dense(np.array([[0, 1], [1, 0]])), key=lambda z: z.real)
    assert np.allclose(ev, [-1, 1])


def test_eig_dense_cubic_oracle():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        got = eig_dense(a)
        for z in cubic_roots(a):
            assert min(abs(z - w) for w in got) < 1e-8


def test_eig_dense_backward_error():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(60, 60)) + 1j * rng.normal(size=(60, 60))
    norm = np.linalg.norm(a, 2)
    for z in eig_dense(a)[:10]:
        smin = np.linalg.svd(a - z * np.eye(60), compute_uv=False)[-1]
        assert smin <= 1e-8 * norm


def test_eig_dense_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        eig_dense(np.eye(257))


def test_random_unitary_is_unitary():
    u = random_unitary(np.random.default_rng(0), 12)
    assert np.allclose(u.conj().T @ u, np.eye(12), atol=1e-12)


def test_lab_identity_hook():
    rep = finite_lab_run(2, 1, 2, (1, 1), 1, 0, unitary=lambda rng, d: np.eye(d))
    assert rep.max_modulus_excess == 0.0
    assert rep.boundary_count_violations == 0 and rep.containment_violations == 0


def test_positivity_kernel_vector():
    a = np.diag([1.0, 2.0]).astype(complex)
    x = np.array([1.0, 0.0], dtype=complex)
    assert np.linalg.norm(a @ x) == 1.0
    assert np.linalg.norm((np.eye(2) - a) @ x) == 0.0
    assert positivity_excess(a, x, 1.0) == 0.0


def test_lab_deterministic_and_clean():
    a = finite_lab_run(12, 1, 2, (2, 3), 20, 42)
    b = finite_lab_run(12, 1, 2, (2, 3), 20, 42)
    assert a == b
    assert a.containment_violations == a.boundary_count_violations == a.positivity_violations == 0
    assert finite_lab_run(12, 1, 2, (2, 3), 20, 43) != a


def test_lab_kernel_dims():
    with pytest.raises(BadKernelDims):
        finite_lab_run(4, 1, 2, (3, 2), 1, 0)


def test_positivity_trials_small():
    rep = positivity_trials(50, 5, 1.0, 2.0, seed=1)
    assert rep.violations == 0 and rep.max_excess <= 1e-10
