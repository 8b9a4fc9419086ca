import json

import numpy as np
import pytest

from conftest import random_hamiltonian, symmetrize_g
from specbound.double_factorization import (
    double_factorize,
    dump_df_json,
    reconstruct,
    two_body_df_sector_bound,
)
from specbound.fci import SectorHamiltonian, enumerate_determinants
from specbound.majorana import majorana_split
from specbound.sectors import SymmetrySector, canonical_sectors


def test_rank_one_product_tensor(rng):
    v = rng.standard_normal(3)
    g = np.einsum("p,q,r,s->pqrs", v, v, v, v)
    df = double_factorize(g, tol=1e-10)
    assert df.rank == 1
    leaf = df.leaves[0]
    # the leaf matrix v v^T has a single non-zero eigenvalue
    assert np.sum(np.abs(leaf.alpha) > 1e-8) == 1
    assert df.reconstruction_error <= 1e-10 * np.max(np.abs(g))


def test_diagonal_tensor_two_leaves():
    n = 2
    c = 0.7
    g = np.zeros((n, n, n, n))
    for p in range(n):
        g[p, p, p, p] = c
    # unfolded matrix is diag(c, 0, 0, c): two unit-weight leaves
    df = double_factorize(g, tol=1e-10)
    assert df.rank == 2
    rebuilt = reconstruct(df, n)
    assert np.max(np.abs(rebuilt - g)) <= 1e-12
    for leaf in df.leaves:
        # each leaf reconstructs exactly one diagonal entry
        V = (leaf.U * leaf.alpha) @ leaf.U.T
        contrib = leaf.sign * np.multiply.outer(V, V)
        assert np.count_nonzero(np.abs(contrib) > 1e-10) == 1


def test_random_tensor_reconstruction(rng):
    for n in (2, 3, 4):
        g = symmetrize_g(rng.standard_normal((n,) * 4))
        df = double_factorize(g, tol=1e-10)
        err = np.max(np.abs(reconstruct(df, n) - g))
        assert err <= 1e-10 * np.max(np.abs(g))
        assert df.reconstruction_error == pytest.approx(err, abs=1e-14)
        for leaf in df.leaves:
            dev = np.max(np.abs(leaf.U.T @ leaf.U - np.eye(n)))
            assert dev <= 1e-10


def test_negative_eigenvalue_kept_with_sign(rng):
    n = 2
    g = symmetrize_g(rng.standard_normal((n,) * 4))
    G = g.reshape(n * n, n * n)
    assert np.min(np.linalg.eigvalsh(G)) < 0, "random tensor should be indefinite"
    df = double_factorize(g, tol=1e-10)
    assert any(leaf.sign == -1 for leaf in df.leaves)
    assert any("negative" in w for w in df.warnings)
    assert np.max(np.abs(reconstruct(df, n) - g)) <= 1e-10 * np.max(np.abs(g))


def test_zero_tensor():
    df = double_factorize(np.zeros((2, 2, 2, 2)))
    assert df.rank == 0
    assert df.reconstruction_error == 0.0
    assert two_body_df_sector_bound(df, SymmetrySector(1, 1)) == 0.0


def test_flat_leaf_at_half_filling_gives_zero_bound():
    # single leaf with alpha = (1, 1): both channels see equal bottom and top fills
    n = 2
    v = np.array([1.0, 1.0])
    V = np.diag(v)
    g = np.multiply.outer(V, V)
    df = double_factorize(g, tol=1e-12)
    assert df.rank == 1
    assert two_body_df_sector_bound(df, SymmetrySector(1, 1)) == pytest.approx(0.0, abs=1e-12)


def test_df_bound_dominates_fci_two_body_half_range(rng):
    ham = random_hamiltonian(rng, 3)
    split = majorana_split(ham)
    df = double_factorize(ham.g, tol=1e-10)
    for sector in canonical_sectors(3):
        basis = enumerate_determinants(3, sector)
        w = np.linalg.eigvalsh(SectorHamiltonian(split.two_body, basis).dense_matrix())
        half_range = 0.5 * (w[-1] - w[0])
        bound = two_body_df_sector_bound(df, sector)
        assert half_range <= bound + 1e-9


def test_df_json_export(tmp_path, rng):
    g = symmetrize_g(rng.standard_normal((2,) * 4))
    df = double_factorize(g, tol=1e-10)
    path = tmp_path / "df.json"
    dump_df_json(df, path)
    doc = json.loads(path.read_text())
    assert doc["truncation_tol"] == 1e-10
    assert len(doc["leaves"]) == df.rank
    assert "reconstruction_error" in doc
    leaf = doc["leaves"][0]
    assert len(leaf["alpha"]) == 2 and len(leaf["U"]) == 4
