import numpy as np
import pytest

from conftest import random_hamiltonian
from oracle_jw import sector_projection
from specbound import SpinFreeHamiltonian
from specbound.fci import (
    DimensionCapError,
    SectorHamiltonian,
    apply_hamiltonian,
    determinant_vector,
    enumerate_determinants,
    extremal_eigenvalues,
    lanczos_extremal,
    s2_matrix_element,
)
from specbound.majorana import one_body_sector_extremes
from specbound.orbital_rotation import expm_antisymmetric, n_rotation_params, transform_integrals
from specbound.sectors import SymmetrySector, canonical_sectors


def test_enumeration_counts():
    assert enumerate_determinants(2, SymmetrySector(1, 1)).dim == 4
    assert enumerate_determinants(4, SymmetrySector(2, 2)).dim == 36
    assert enumerate_determinants(6, SymmetrySector(3, 3)).dim == 400


def test_strings_sorted_ascending():
    basis = enumerate_determinants(4, SymmetrySector(2, 1))
    assert list(basis.alpha_strings) == sorted(basis.alpha_strings)
    assert all(bin(s).count("1") == 2 for s in basis.alpha_strings)
    assert len(set(basis.alpha_strings)) == 6


def test_dimension_cap_refusal():
    with pytest.raises(DimensionCapError, match="400"):
        enumerate_determinants(6, SymmetrySector(3, 3), cap=399)


def test_number_operator():
    n = 3
    ham = SpinFreeHamiltonian.from_arrays(0.0, np.eye(n), np.zeros((n,) * 4))
    for sector in [SymmetrySector(1, 0), SymmetrySector(2, 1), SymmetrySector(3, 3)]:
        basis = enumerate_determinants(n, sector)
        x = np.zeros(basis.dim)
        x[0] = 1.0
        y = apply_hamiltonian(ham, basis, x)
        assert y == pytest.approx(sector.eta * x, abs=1e-12)


def test_single_determinant_single_orbital():
    h = np.array([[-1.0]])
    g = np.zeros((1, 1, 1, 1))
    g[0, 0, 0, 0] = 0.8
    ham = SpinFreeHamiltonian.from_arrays(0.2, h, g)
    basis = enumerate_determinants(1, SymmetrySector(1, 1))
    y = apply_hamiltonian(ham, basis, np.array([1.0]))
    assert y[0] == pytest.approx(0.2 - 2.0 + 0.8, abs=1e-12)


def test_dense_matrix_symmetric_and_matches_operator_algebra(rng):
    ham = random_hamiltonian(rng, 3)
    worst = 0.0
    for sector in canonical_sectors(3):
        basis = enumerate_determinants(3, sector)
        dense = SectorHamiltonian(ham, basis).dense_matrix()
        assert np.max(np.abs(dense - dense.T)) <= 1e-12
        brute = sector_projection(ham, basis)
        worst = max(worst, float(np.max(np.abs(dense - brute))))
    assert worst <= 1e-12


def test_matvec_matches_dense_columns(rng):
    ham = random_hamiltonian(rng, 3)
    basis = enumerate_determinants(3, SymmetrySector(2, 1))
    op = SectorHamiltonian(ham, basis)
    dense = op.dense_matrix()
    for j in [0, basis.dim // 2, basis.dim - 1]:
        e = np.zeros(basis.dim)
        e[j] = 1.0
        assert np.max(np.abs(op.matvec(e) - dense[:, j])) <= 1e-12


def test_vacuum_sector_is_constant(rng):
    ham = random_hamiltonian(rng, 3, e_const=1.234)
    res = extremal_eigenvalues(ham, SymmetrySector(0, 0))
    assert res.e_min == pytest.approx(1.234, abs=1e-12)
    assert res.e_max == pytest.approx(1.234, abs=1e-12)
    assert res.dim == 1


def test_one_body_extremes_match_filling(rng):
    n = 4
    h = rng.standard_normal((n, n))
    h = 0.5 * (h + h.T)
    ham = SpinFreeHamiltonian.from_arrays(-0.5, h, np.zeros((n,) * 4))
    for sector in [SymmetrySector(2, 2), SymmetrySector(3, 0), SymmetrySector(1, 1)]:
        res = extremal_eigenvalues(ham, sector)
        e_min, e_max = one_body_sector_extremes(ham, sector)
        assert res.e_min == pytest.approx(e_min, abs=1e-10)
        assert res.e_max == pytest.approx(e_max, abs=1e-10)


def test_spectrum_invariant_under_orbital_rotation(rng):
    n = 3
    ham = random_hamiltonian(rng, n)
    U = expm_antisymmetric(rng.normal(0, 0.6, n_rotation_params(n)), n)
    h_t, g_t = transform_integrals(ham.h, ham.g, U)
    rotated = SpinFreeHamiltonian.from_arrays(ham.e_const, h_t, g_t, validate=False)
    for sector in [SymmetrySector(2, 1), SymmetrySector(1, 1)]:
        a = extremal_eigenvalues(ham, sector)
        b = extremal_eigenvalues(rotated, sector)
        assert a.e_min == pytest.approx(b.e_min, abs=1e-9)
        assert a.e_max == pytest.approx(b.e_max, abs=1e-9)


def test_mirror_sector_degeneracy(rng):
    ham = random_hamiltonian(rng, 4)
    a = extremal_eigenvalues(ham, SymmetrySector(3, 1))
    b = extremal_eigenvalues(ham, SymmetrySector(1, 3))
    assert a.e_min == pytest.approx(b.e_min, abs=1e-10)
    assert a.e_max == pytest.approx(b.e_max, abs=1e-10)


def test_sector_block_never_leaks(rng):
    # applying H to a sector vector stays in the sector: checked implicitly by
    # comparing against the projected operator-algebra block on all sectors in
    # test_dense_matrix_symmetric_and_matches_operator_algebra; here check the
    # projector complement explicitly for one sector
    from oracle_jw import determinant_fock_vector, full_fock_hamiltonian

    ham = random_hamiltonian(rng, 2)
    basis = enumerate_determinants(2, SymmetrySector(1, 1))
    H = full_fock_hamiltonian(ham)
    for sa in basis.alpha_strings:
        for sb in basis.beta_strings:
            v = determinant_fock_vector(2, sa, sb)
            w = H @ v
            # remove the in-sector part
            for sa2 in basis.alpha_strings:
                for sb2 in basis.beta_strings:
                    u = determinant_fock_vector(2, sa2, sb2)
                    w = w - (u @ w) * u
            assert np.max(np.abs(w)) <= 1e-12


def test_lanczos_matches_dense(rng):
    ham = random_hamiltonian(rng, 4)
    sector = SymmetrySector(2, 2)
    dense = extremal_eigenvalues(ham, sector)
    iterative = extremal_eigenvalues(ham, sector, dense_cap=10)
    assert iterative.method == "iterative"
    assert iterative.converged
    assert iterative.residuals <= 1e-9
    assert iterative.e_min == pytest.approx(dense.e_min, abs=1e-8)
    assert iterative.e_max == pytest.approx(dense.e_max, abs=1e-8)


def test_lanczos_exact_on_small_space(rng):
    A = rng.standard_normal((12, 12))
    A = 0.5 * (A + A.T)
    theta, resid, iters, ok = lanczos_extremal(lambda x: A @ x, 12, max_iter=200, tol=1e-11)
    assert ok
    assert theta == pytest.approx(np.linalg.eigvalsh(A)[0], abs=1e-9)


def test_lanczos_flags_nonconvergence(rng):
    ham = random_hamiltonian(rng, 4)
    res = extremal_eigenvalues(ham, SymmetrySector(2, 2), dense_cap=10, max_iter=3)
    assert not res.converged
    assert res.residuals > 1e-9


def test_s2_high_spin_and_closed_shell():
    basis = enumerate_determinants(3, SymmetrySector(2, 0))
    x = np.zeros(basis.dim)
    x[0] = 1.0
    assert s2_matrix_element(basis, x) == pytest.approx(2.0, abs=1e-12)

    basis2 = enumerate_determinants(3, SymmetrySector(1, 1))
    # closed-shell determinant: same orbital occupied in both spins
    idx = 0 * len(basis2.beta_strings) + 0
    y = np.zeros(basis2.dim)
    y[idx] = 1.0
    assert s2_matrix_element(basis2, y) == pytest.approx(0.0, abs=1e-12)


def test_s2_on_rotated_determinant(rng):
    basis = enumerate_determinants(4, SymmetrySector(3, 1))
    U = expm_antisymmetric(rng.normal(0, 0.5, 6), 4)
    c = determinant_vector(basis, U)
    assert np.linalg.norm(c) == pytest.approx(1.0, abs=1e-10)
    assert s2_matrix_element(basis, c) == pytest.approx(2.0, abs=1e-10)


def test_s2_rejects_unnormalized():
    basis = enumerate_determinants(2, SymmetrySector(1, 0))
    with pytest.raises(ValueError, match="normalized"):
        s2_matrix_element(basis, np.full(basis.dim, 0.9))


def test_apply_rejects_wrong_length(rng):
    ham = random_hamiltonian(rng, 2)
    basis = enumerate_determinants(2, SymmetrySector(1, 1))
    with pytest.raises(ValueError, match="length"):
        apply_hamiltonian(ham, basis, np.zeros(3))
