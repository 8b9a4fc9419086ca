import numpy as np
import pytest

from conftest import random_hamiltonian
from specbound import SpinFreeHamiltonian
from specbound.fci import (
    SectorHamiltonian,
    determinant_vector,
    enumerate_determinants,
    s2_matrix_element,
)
from specbound.hf_optimizer import (
    OptimizerSettings,
    hf_energy,
    hf_gradient,
    maximize_sector,
    minimize_sector,
)
from specbound.majorana import one_body_sector_extremes
from specbound.orbital_rotation import OrbitalRotation, n_rotation_params
from specbound.sectors import SymmetrySector, canonical_sectors

FAST = OptimizerSettings(restarts=2, seed=11)


def one_body_ham(rng, n, e_const=0.0):
    h = rng.standard_normal((n, n))
    h = 0.5 * (h + h.T)
    return SpinFreeHamiltonian.from_arrays(e_const, h, np.zeros((n,) * 4))


def test_energy_diagonal_one_body_closed_shell():
    h = np.diag([-1.0, -0.5])
    ham = SpinFreeHamiltonian.from_arrays(0.3, h, np.zeros((2,) * 4))
    rot = OrbitalRotation.identity(2)
    assert hf_energy(ham, rot, SymmetrySector(1, 1)) == pytest.approx(0.3 - 2.0, abs=1e-14)


def test_energy_single_orbital_coulomb():
    h = np.array([[-1.0]])
    g = np.zeros((1, 1, 1, 1))
    g[0, 0, 0, 0] = 0.8
    ham = SpinFreeHamiltonian.from_arrays(0.1, h, g)
    rot = OrbitalRotation.identity(1)
    assert hf_energy(ham, rot, SymmetrySector(1, 1)) == pytest.approx(0.1 - 2.0 + 0.8, abs=1e-14)


def test_energy_matches_fci_matrix_element(rng):
    ham = random_hamiltonian(rng, 3)
    sector = SymmetrySector(2, 1)
    rot = OrbitalRotation.from_params(rng.normal(0, 0.5, 3), 3)
    e = hf_energy(ham, rot, sector)
    basis = enumerate_determinants(3, sector)
    c = determinant_vector(basis, rot.cached_U)
    dense = SectorHamiltonian(ham, basis).dense_matrix()
    assert e == pytest.approx(float(c @ dense @ c), abs=1e-10)


def test_gradient_matches_finite_differences(rng):
    step = 1e-5
    for _ in range(8):
        n = int(rng.integers(2, 5))
        ham = random_hamiltonian(rng, n, g_scale=0.3)
        sector = SymmetrySector(int(rng.integers(0, n + 1)), int(rng.integers(0, n + 1)))
        params = rng.normal(0, 0.4, n_rotation_params(n))
        rot = OrbitalRotation.from_params(params, n)
        grad = hf_gradient(ham, rot, sector)
        for k in range(params.size):
            plus = params.copy()
            plus[k] += step
            minus = params.copy()
            minus[k] -= step
            fd = (
                hf_energy(ham, OrbitalRotation.from_params(plus, n), sector)
                - hf_energy(ham, OrbitalRotation.from_params(minus, n), sector)
            ) / (2 * step)
            # componentwise relative check with an absolute floor at the
            # central-difference roundoff scale
            assert abs(grad[k] - fd) <= max(1e-6 * abs(fd), 1e-8)


def test_gradient_vanishes_at_converged_minimum(rng):
    ham = random_hamiltonian(rng, 3)
    sector = SymmetrySector(2, 1)
    result = minimize_sector(ham, sector, FAST)
    assert result.converged
    grad = hf_gradient(ham, result.rotation, sector)
    assert np.max(np.abs(grad)) <= FAST.grad_tol


def test_gradient_zero_in_occupied_occupied_block(rng):
    # rotations among occupied (or among virtual) orbitals leave the
    # determinant invariant for a diagonal one-body Hamiltonian at zero kappa
    n = 4
    ham = SpinFreeHamiltonian.from_arrays(0.0, np.diag([-2.0, -1.0, 1.0, 2.0]), np.zeros((n,) * 4))
    sector = SymmetrySector(2, 2)
    grad = hf_gradient(ham, OrbitalRotation.identity(n), sector)
    rows, cols = np.tril_indices(n, -1)
    for k, (i, j) in enumerate(zip(rows, cols)):
        both_occ = i < 2 and j < 2
        both_virt = i >= 2 and j >= 2
        if both_occ or both_virt:
            assert abs(grad[k]) <= 1e-12


def test_energy_invariance_within_blocks(rng):
    ham = random_hamiltonian(rng, 4)
    sector = SymmetrySector(2, 2)
    base = minimize_sector(ham, sector, FAST)
    e0 = base.energy
    params = np.array(base.rotation.params)
    rows, cols = np.tril_indices(4, -1)
    rng2 = np.random.default_rng(5)
    for k, (i, j) in enumerate(zip(rows, cols)):
        if (i < 2 and j < 2) or (i >= 2 and j >= 2):
            bumped = params.copy()
            bumped[k] += rng2.normal(0, 0.05)
            # occupied-occupied / virtual-virtual generators act after the
            # optimized rotation, i.e. on the optimized orbitals
            U = base.rotation.cached_U @ OrbitalRotation.from_params(
                bumped - params, 4
            ).cached_U
            perturbed = hf_energy_from_matrix(ham, U, sector)
            assert abs(perturbed - e0) <= 1e-10


def hf_energy_from_matrix(ham, U, sector):
    from specbound.hf_optimizer import _energy_terms

    return _energy_terms(ham, U, sector)[0]


def test_minimize_one_body_matches_filling(rng):
    ham = one_body_ham(rng, 4, e_const=0.7)
    for sector in canonical_sectors(4):
        lo = minimize_sector(ham, sector, FAST)
        hi = maximize_sector(ham, sector, FAST)
        e_min, e_max = one_body_sector_extremes(ham, sector)
        assert lo.energy == pytest.approx(e_min, abs=1e-9)
        assert hi.energy == pytest.approx(e_max, abs=1e-9)
        assert lo.converged and hi.converged


def test_vacuum_sector_shortcut(rng):
    ham = random_hamiltonian(rng, 3, e_const=-2.5)
    lo = minimize_sector(ham, SymmetrySector(0, 0), FAST)
    hi = maximize_sector(ham, SymmetrySector(0, 0), FAST)
    assert lo.energy == -2.5 and hi.energy == -2.5
    assert lo.converged and lo.restarts_used == 0


def test_single_orbital_no_parameters(rng):
    h = np.array([[-1.0]])
    g = np.zeros((1, 1, 1, 1))
    g[0, 0, 0, 0] = 0.8
    ham = SpinFreeHamiltonian.from_arrays(0.0, h, g)
    lo = minimize_sector(ham, SymmetrySector(1, 1), FAST)
    assert lo.energy == pytest.approx(-2.0 + 0.8, abs=1e-12)
    assert lo.converged


def test_variational_ordering_vs_fci(rng):
    ham = random_hamiltonian(rng, 4, g_scale=0.5)
    for sector in [SymmetrySector(2, 2), SymmetrySector(3, 1), SymmetrySector(1, 1)]:
        lo = minimize_sector(ham, sector, FAST)
        hi = maximize_sector(ham, sector, FAST)
        basis = enumerate_determinants(4, sector)
        w = np.linalg.eigvalsh(SectorHamiltonian(ham, basis).dense_matrix())
        assert lo.energy >= w[0] - 1e-9
        assert hi.energy <= w[-1] + 1e-9
        assert lo.energy <= hi.energy + 1e-12


def test_optimized_determinant_is_spin_eigenfunction(rng):
    ham = random_hamiltonian(rng, 4)
    sector = SymmetrySector(3, 1)
    result = minimize_sector(ham, sector, FAST)
    basis = enumerate_determinants(4, sector)
    c = determinant_vector(basis, result.rotation.cached_U)
    c = c / np.linalg.norm(c)
    assert s2_matrix_element(basis, c) == pytest.approx(sector.s_squared(), abs=1e-10)


def test_determinism_with_fixed_seed(rng):
    ham = random_hamiltonian(rng, 3)
    sector = SymmetrySector(2, 1)
    settings = OptimizerSettings(restarts=3, seed=42)
    a = minimize_sector(ham, sector, settings)
    b = minimize_sector(ham, sector, settings)
    assert a.energy == b.energy
    assert np.array_equal(a.rotation.params, b.rotation.params)
    c = maximize_sector(ham, sector, settings)
    d = maximize_sector(ham, sector, settings)
    assert c.energy == d.energy


def test_settings_validation():
    with pytest.raises(ValueError):
        OptimizerSettings(grad_tol=0.0)
    with pytest.raises(ValueError):
        OptimizerSettings(restarts=-1)
    with pytest.raises(ValueError):
        OptimizerSettings(max_iter=0)
