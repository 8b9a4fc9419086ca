"""Exact sector spectra by full configuration interaction.

Determinants are products of an alpha and a beta occupation bitstring over
spatial orbitals (bit p set = orbital p occupied).  Conventions, fixed so
matrix elements are reproducible bit for bit:

* within each spin the creation-operator string is ordered by ascending
  orbital index left to right (operators applied in descending index order),
* the alpha block stands to the left of the beta block,
* basis strings are sorted strictly ascending as integers and a determinant
  has flat index ``i_alpha * len(beta_strings) + i_beta``.

Because spin excitation operators carry two fermionic factors, crossing the
alpha block contributes no net phase and the two spins factorize.  The
Hamiltonian acts through per-spin single-excitation tables; the two-electron
part is applied through the exact eigenfactorization of the (pq),(rs)
unfolding of g, so a matrix-vector product is a short sequence of
(strings x strings) matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
import scipy.linalg
import scipy.sparse

from .hamiltonian import SpinFreeHamiltonian
from .sectors import SymmetrySector

DEFAULT_DIM_CAP = 2_000_000
DEFAULT_DENSE_CAP = 2000
LANCZOS_MAX_ITER = 500
LANCZOS_TOL = 1e-9
_LANCZOS_SEED = 20240
_DENSE_TABLE_LIMIT = 600


class DimensionCapError(RuntimeError):
    """Sector dimension exceeds the configured FCI cap."""


@dataclass(frozen=True)
class DeterminantBasis:
    n_orb: int
    sector: SymmetrySector
    alpha_strings: tuple[int, ...]
    beta_strings: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.alpha_strings) * len(self.beta_strings)


@dataclass(frozen=True)
class SpectrumResult:
    e_min: float
    e_max: float
    method: str
    residuals: float
    dim: int
    converged: bool = True
    iterations: int = 0


def occupation_strings(n_orb: int, n_elec: int) -> tuple[int, ...]:
    """All C(n_orb, n_elec) bitmasks, sorted ascending as integers."""
    masks = [
        sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_elec)
    ]
    return tuple(sorted(masks))


def enumerate_determinants(
    n_orb: int, sector: SymmetrySector, cap: int = DEFAULT_DIM_CAP
) -> DeterminantBasis:
    sector.validate(n_orb)
    dim = comb(n_orb, sector.n_alpha) * comb(n_orb, sector.n_beta)
    if dim > cap:
        raise DimensionCapError(
            f"sector ({sector.n_alpha},{sector.n_beta}) has dimension {dim} "
            f"exceeding the cap {cap}"
        )
    return DeterminantBasis(
        n_orb=n_orb,
        sector=sector,
        alpha_strings=occupation_strings(n_orb, sector.n_alpha),
        beta_strings=occupation_strings(n_orb, sector.n_beta),
    )


def _parity_below(mask: int, p: int) -> int:
    """(-1)^(number of occupied orbitals with index < p)."""
    return -1 if (mask & ((1 << p) - 1)).bit_count() & 1 else 1


@dataclass(frozen=True)
class _ExcitationTable:
    """COO skeleton of all E_pq = a+_p a_q moves within one spin's strings."""

    bra: np.ndarray
    ket: np.ndarray
    p: np.ndarray
    q: np.ndarray
    sign: np.ndarray
    n_strings: int

    def operator(self, coeff: np.ndarray, dense: bool) -> np.ndarray | scipy.sparse.csr_matrix:
        """Matrix of sum_pq coeff[p, q] E_pq over this spin's strings."""
        data = self.sign * coeff[self.p, self.q]
        mat = scipy.sparse.csr_matrix(
            (data, (self.bra, self.ket)), shape=(self.n_strings, self.n_strings)
        )
        return mat.toarray() if dense else mat


def _build_excitation_table(n_orb: int, strings: tuple[int, ...]) -> _ExcitationTable:
    index = {s: i for i, s in enumerate(strings)}
    bra, ket, ps, qs, signs = [], [], [], [], []
    for i, s in enumerate(strings):
        occ = [p for p in range(n_orb) if (s >> p) & 1]
        for p in occ:  # number operators
            bra.append(i)
            ket.append(i)
            ps.append(p)
            qs.append(p)
            signs.append(1.0)
        for q in occ:
            removed = s & ~(1 << q)
            sign_q = _parity_below(s, q)
            for p in range(n_orb):
                if (removed >> p) & 1 or p == q:
                    continue
                j = index[removed | (1 << p)]
                bra.append(j)
                ket.append(i)
                ps.append(p)
                qs.append(q)
                signs.append(float(sign_q * _parity_below(removed, p)))
    return _ExcitationTable(
        bra=np.asarray(bra, dtype=np.int64),
        ket=np.asarray(ket, dtype=np.int64),
        p=np.asarray(ps, dtype=np.int64),
        q=np.asarray(qs, dtype=np.int64),
        sign=np.asarray(signs, dtype=float),
        n_strings=len(strings),
    )


def _eigenfactors(g: np.ndarray, rel_tol: float = 1e-15) -> list[tuple[float, np.ndarray]]:
    """Exact eigenpair factorization of the (pq),(rs) unfolding of g."""
    n = g.shape[0]
    G = g.reshape(n * n, n * n)
    w, vecs = np.linalg.eigh(G)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    factors = []
    for k in range(w.size):
        if abs(w[k]) <= rel_tol * scale:
            continue
        V = vecs[:, k].reshape(n, n)
        factors.append((float(w[k]), 0.5 * (V + V.T)))
    return factors


class SectorHamiltonian:
    """Hamiltonian action prepared for one determinant basis."""

    def __init__(self, ham: SpinFreeHamiltonian, basis: DeterminantBasis):
        if ham.n_orb != basis.n_orb:
            raise ValueError("Hamiltonian and basis orbital counts differ")
        self.ham = ham
        self.basis = basis
        self.n_alpha_strings = len(basis.alpha_strings)
        self.n_beta_strings = len(basis.beta_strings)
        self.dim = basis.dim

        table_a = _build_excitation_table(basis.n_orb, basis.alpha_strings)
        if basis.sector.n_beta == basis.sector.n_alpha:
            table_b = table_a
        else:
            table_b = _build_excitation_table(basis.n_orb, basis.beta_strings)

        dense = max(table_a.n_strings, table_b.n_strings) <= _DENSE_TABLE_LIMIT
        t = ham.h - 0.5 * np.einsum("prrq->pq", ham.g)
        self._one_body = (table_a.operator(t, dense), table_b.operator(t, dense))
        self._leaves = [
            (w, table_a.operator(V, dense), table_b.operator(V, dense))
            for w, V in _eigenfactors(ham.g)
        ]

    def _apply_pair(self, A, B, X3: np.ndarray) -> np.ndarray:
        na, nb, k = X3.shape
        Y = (A @ X3.reshape(na, nb * k)).reshape(na, nb, k)
        Z = (B @ X3.transpose(1, 0, 2).reshape(nb, na * k)).reshape(nb, na, k)
        return Y + Z.transpose(1, 0, 2)

    def apply_batch(self, X3: np.ndarray) -> np.ndarray:
        """Apply H to a (n_alpha_strings, n_beta_strings, k) batch."""
        Y = self.ham.e_const * X3
        A, B = self._one_body
        Y += self._apply_pair(A, B, X3)
        for w, Av, Bv in self._leaves:
            Z = self._apply_pair(Av, Bv, X3)
            Y += (0.5 * w) * self._apply_pair(Av, Bv, Z)
        return Y

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {x.shape}")
        X3 = x.reshape(self.n_alpha_strings, self.n_beta_strings, 1)
        return self.apply_batch(X3).reshape(self.dim)

    def dense_matrix(self) -> np.ndarray:
        eye = np.eye(self.dim).reshape(
            self.n_alpha_strings, self.n_beta_strings, self.dim
        )
        return self.apply_batch(eye).reshape(self.dim, self.dim)


def apply_hamiltonian(
    ham: SpinFreeHamiltonian, basis: DeterminantBasis, vector: np.ndarray
) -> np.ndarray:
    """y = H x in the determinant basis (prepares the action on every call)."""
    return SectorHamiltonian(ham, basis).matvec(vector)


def lanczos_extremal(
    apply_fn,
    dim: int,
    max_iter: int = LANCZOS_MAX_ITER,
    tol: float = LANCZOS_TOL,
    seed: int = _LANCZOS_SEED,
) -> tuple[float, float, int, bool]:
    """Smallest eigenvalue by Lanczos with full reorthogonalization.

    Returns (theta, residual, iterations, converged); residual is the
    standard beta * |s_last| bound for the extremal Ritz pair.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)

    m_max = min(max_iter, dim)
    V = np.empty((dim, m_max))
    alphas: list[float] = []
    betas: list[float] = []
    theta = np.inf
    resid = np.inf

    for it in range(m_max):
        V[:, it] = v
        w = apply_fn(v)
        a = float(v @ w)
        alphas.append(a)
        r = w - a * v
        if it > 0:
            r -= betas[-1] * V[:, it - 1]
        basis_so_far = V[:, : it + 1]
        for _ in range(2):  # full reorthogonalization, twice
            r -= basis_so_far @ (basis_so_far.T @ r)
        beta = float(np.linalg.norm(r))

        if it == 0:
            theta, s_last = a, 1.0
        else:
            w_t, v_t = scipy.linalg.eigh_tridiagonal(
                np.asarray(alphas), np.asarray(betas), select="i", select_range=(0, 0)
            )
            theta, s_last = float(w_t[0]), float(v_t[-1, 0])
        resid = beta * abs(s_last)
        if resid <= tol:
            return theta, resid, it + 1, True
        scale = max(1.0, float(np.max(np.abs(alphas))))
        if beta <= 1e-12 * scale:
            # invariant subspace exhausted; Ritz value exact in its span
            return theta, resid, it + 1, True
        betas.append(beta)
        v = r / beta

    return theta, resid, m_max, False


def extremal_eigenvalues(
    ham: SpinFreeHamiltonian,
    sector: SymmetrySector,
    dense_cap: int = DEFAULT_DENSE_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
    max_iter: int = LANCZOS_MAX_ITER,
    tol: float = LANCZOS_TOL,
) -> SpectrumResult:
    """Extremal sector eigenvalues: dense below dense_cap, else Lanczos on +-H."""
    basis = enumerate_determinants(ham.n_orb, sector, cap=dim_cap)
    op = SectorHamiltonian(ham, basis)
    if basis.dim <= dense_cap:
        w = np.linalg.eigvalsh(op.dense_matrix())
        return SpectrumResult(
            e_min=float(w[0]),
            e_max=float(w[-1]),
            method="dense",
            residuals=0.0,
            dim=basis.dim,
        )
    lo, r_lo, it_lo, ok_lo = lanczos_extremal(op.matvec, basis.dim, max_iter, tol)
    hi_neg, r_hi, it_hi, ok_hi = lanczos_extremal(
        lambda x: -op.matvec(x), basis.dim, max_iter, tol
    )
    return SpectrumResult(
        e_min=lo,
        e_max=-hi_neg,
        method="iterative",
        residuals=max(r_lo, r_hi),
        dim=basis.dim,
        converged=ok_lo and ok_hi,
        iterations=max(it_lo, it_hi),
    )


def determinant_vector(basis: DeterminantBasis, U: np.ndarray) -> np.ndarray:
    """Amplitudes of the determinant built from the first eta_sigma columns of U.

    The coefficient on a basis determinant is the product of the alpha and
    beta minors det(U[occ, :eta]); this realizes the rotated determinant in
    the original orbital basis.
    """
    n_a = basis.sector.n_alpha
    n_b = basis.sector.n_beta
    amps_a = np.array(
        [
            np.linalg.det(U[[p for p in range(basis.n_orb) if (s >> p) & 1], :n_a])
            for s in basis.alpha_strings
        ]
    )
    amps_b = np.array(
        [
            np.linalg.det(U[[p for p in range(basis.n_orb) if (s >> p) & 1], :n_b])
            for s in basis.beta_strings
        ]
    )
    return np.outer(amps_a, amps_b).reshape(basis.dim)


def s2_matrix_element(basis: DeterminantBasis, vector: np.ndarray) -> float:
    """<x|S^2|x> via S+S- + S_z(S_z - 1) applied in the determinant basis."""
    x = np.asarray(vector, dtype=float)
    if x.shape != (basis.dim,):
        raise ValueError(f"expected vector of length {basis.dim}")
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"vector must be normalized, got |x| = {norm:.6e}")

    sector = basis.sector
    m_s = sector.m_s
    if sector.n_alpha == 0:
        return m_s * (m_s - 1.0)

    lowered = SymmetrySector(sector.n_alpha - 1, sector.n_beta + 1)
    if lowered.n_beta > basis.n_orb:
        return m_s * (m_s - 1.0)
    target = enumerate_determinants(basis.n_orb, lowered)
    a_index = {s: i for i, s in enumerate(target.alpha_strings)}
    b_index = {s: i for i, s in enumerate(target.beta_strings)}

    X = x.reshape(len(basis.alpha_strings), len(basis.beta_strings))
    Y = np.zeros((len(target.alpha_strings), len(target.beta_strings)))
    block_phase = -1 if (sector.n_alpha - 1) & 1 else 1
    for p in range(basis.n_orb):
        bit = 1 << p
        for ia, sa in enumerate(basis.alpha_strings):
            if not sa & bit:
                continue
            ja = a_index[sa & ~bit]
            sign_a = _parity_below(sa, p)
            for ib, sb in enumerate(basis.beta_strings):
                if sb & bit:
                    continue
                jb = b_index[sb | bit]
                sign_b = _parity_below(sb, p)
                Y[ja, jb] += block_phase * sign_a * sign_b * X[ia, ib]
    return float(np.sum(Y * Y)) + m_s * (m_s - 1.0)
