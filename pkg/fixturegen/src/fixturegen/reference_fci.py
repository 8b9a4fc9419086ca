"""Independent sector FCI references via sparse Fock-space operator algebra.

Reference energies for fixture manifests must not come from the consumer's
own FCI machinery, so this builds the Hamiltonian from elementary
Jordan-Wigner ladder matrices over the full 4^n Fock space (alpha modes
0..n-1, then beta modes), projects onto the electron-count sector and
diagonalizes the block.  Practical up to about 8 orbitals.

The integrals must be expressed in an orthonormal orbital basis (canonical
MOs or symmetrically orthogonalized AOs); raw AO integrals with a
non-identity overlap are not meaningful here.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse
import scipy.sparse.linalg


def _ladder_ops(n_modes: int) -> list[scipy.sparse.csr_matrix]:
    """Annihilation operators with (-1)^(occupied below) JW phases."""
    sz = scipy.sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
    lower = scipy.sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    eye = scipy.sparse.identity(2, format="csr")
    ops = []
    for k in range(n_modes):
        factors = [sz] * k + [lower] + [eye] * (n_modes - k - 1)
        op = factors[0]
        for f in factors[1:]:
            op = scipy.sparse.kron(op, f, format="csr")
        ops.append(op)
    return ops


def _fock_hamiltonian(e_const, h, g) -> scipy.sparse.csr_matrix:
    n = h.shape[0]
    a = _ladder_ops(2 * n)
    adag = [m.T.tocsr() for m in a]
    dim = 2 ** (2 * n)

    # spin-summed single excitations E_pq = sum_sigma a+_p a_q
    E = [[(adag[p] @ a[q] + adag[p + n] @ a[q + n]).tocsr() for q in range(n)] for p in range(n)]

    H = scipy.sparse.identity(dim, format="csr") * e_const
    t = h - 0.5 * np.einsum("prrq->pq", g)
    for p in range(n):
        for q in range(n):
            if t[p, q] != 0.0:
                H = H + t[p, q] * E[p][q]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = g[p, q, r, s]
                    if v != 0.0:
                        H = H + (0.5 * v) * (E[p][q] @ E[r][s])
    return H.tocsr()


def _sector_indices(n_orb: int, n_alpha: int, n_beta: int) -> np.ndarray:
    """Fock states whose alpha/beta mode counts match; bit k = mode k."""
    idx = []
    alpha_mask = (1 << n_orb) - 1
    for state in range(4**n_orb):
        if (state & alpha_mask).bit_count() != n_alpha:
            continue
        if (state >> n_orb).bit_count() != n_beta:
            continue
        idx.append(state)
    return np.asarray(idx, dtype=np.int64)


def sector_ground_energy(
    e_const: float,
    h: np.ndarray,
    g: np.ndarray,
    n_alpha: int,
    n_beta: int,
) -> float:
    """Lowest eigenvalue of the (n_alpha, n_beta) block."""
    n = h.shape[0]
    H = _fock_hamiltonian(e_const, h, g)
    idx = _sector_indices(n, n_alpha, n_beta)
    block = H[np.ix_(idx, idx)]
    dim = idx.size
    if dim == 1:
        return float(block.toarray()[0, 0])
    if dim <= 600:
        return float(np.linalg.eigvalsh(block.toarray())[0])
    w = scipy.sparse.linalg.eigsh(block, k=1, which="SA", return_eigenvectors=False)
    return float(w[0])


def sector_extremes(
    e_const: float,
    h: np.ndarray,
    g: np.ndarray,
    n_alpha: int,
    n_beta: int,
) -> tuple[float, float]:
    """(lowest, highest) eigenvalue of the sector block; dense only."""
    n = h.shape[0]
    H = _fock_hamiltonian(e_const, h, g)
    idx = _sector_indices(n, n_alpha, n_beta)
    w = np.linalg.eigvalsh(H[np.ix_(idx, idx)].toarray())
    return float(w[0]), float(w[-1])
