"""Orbital rotations exp(-kappa) and integral transformations.

A rotation is parametrized by the strict lower triangle of a real
antisymmetric generator kappa, giving N(N-1)/2 free parameters.  The
parameter order follows ``np.tril_indices(n, -1)`` (row-major over i > j),
with kappa[i, j] = +theta and kappa[j, i] = -theta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-8


class RotationError(ValueError):
    pass


def n_rotation_params(n_orb: int) -> int:
    return n_orb * (n_orb - 1) // 2


def antisymmetric_from_params(params: np.ndarray, n_orb: int) -> np.ndarray:
    """Build the antisymmetric generator from its strict lower triangle."""
    params = np.asarray(params, dtype=float)
    expected = n_rotation_params(n_orb)
    if params.shape != (expected,):
        raise RotationError(
            f"expected {expected} parameters for {n_orb} orbitals, got {params.shape}"
        )
    kappa = np.zeros((n_orb, n_orb))
    rows, cols = np.tril_indices(n_orb, -1)
    kappa[rows, cols] = params
    kappa[cols, rows] = -params
    return kappa


def params_from_antisymmetric(kappa: np.ndarray) -> np.ndarray:
    n = kappa.shape[0]
    rows, cols = np.tril_indices(n, -1)
    return np.asarray(kappa, dtype=float)[rows, cols].copy()


def _eig_antisymmetric(kappa: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of i*kappa (Hermitian): returns (omega, W)."""
    omega, W = np.linalg.eigh(1j * kappa)
    return omega, W


def expm_antisymmetric(params: np.ndarray, n_orb: int) -> np.ndarray:
    """Orthogonal matrix exp(-kappa) via the Hermitian eigenproblem of i*kappa."""
    if not np.all(np.isfinite(params)):
        raise RotationError("rotation parameters must be finite")
    kappa = antisymmetric_from_params(params, n_orb)
    if not np.any(kappa):
        return np.eye(n_orb)
    omega, W = _eig_antisymmetric(kappa)
    # exp(-kappa) = W diag(exp(i*omega)) W^dagger, real up to roundoff
    U = (W * np.exp(1j * omega)) @ W.conj().T
    return np.ascontiguousarray(U.real)


@dataclass(frozen=True)
class OrbitalRotation:
    """Rotation parameters with the cached orthogonal matrix exp(-kappa)."""

    n_orb: int
    params: np.ndarray
    cached_U: np.ndarray

    @classmethod
    def from_params(cls, params: np.ndarray, n_orb: int) -> "OrbitalRotation":
        params = np.array(params, dtype=float, copy=True)
        U = expm_antisymmetric(params, n_orb)
        params.setflags(write=False)
        U.setflags(write=False)
        return cls(n_orb=n_orb, params=params, cached_U=U)

    @classmethod
    def identity(cls, n_orb: int) -> "OrbitalRotation":
        return cls.from_params(np.zeros(n_rotation_params(n_orb)), n_orb)

    def kappa(self) -> np.ndarray:
        return antisymmetric_from_params(self.params, self.n_orb)


def four_index_transform(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    """g'_ijkl = sum_pqrs g_pqrs X_pi X_qj X_rk X_sl via four O(N^5) passes."""
    out = np.tensordot(g, X, axes=([0], [0]))        # qrs,i
    out = np.tensordot(out, X, axes=([0], [0]))      # rs,i,j
    out = np.tensordot(out, X, axes=([0], [0]))      # s,i,j,k
    out = np.tensordot(out, X, axes=([0], [0]))      # i,j,k,l
    return np.ascontiguousarray(out)


def transform_integrals(
    h: np.ndarray, g: np.ndarray, U: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Rotate (h, g) into the orbital basis given by the columns of U.

    U must be orthogonal; the transform preserves the symmetry classes of
    both tensors.
    """
    U = np.asarray(U, dtype=float)
    n = U.shape[0]
    dev = float(np.max(np.abs(U.T @ U - np.eye(n))))
    if dev > ORTHOGONALITY_TOL:
        raise RotationError(f"U is not orthogonal: max |U^T U - I| = {dev:.3e}")
    h_t = U.T @ np.asarray(h, dtype=float) @ U
    g_t = four_index_transform(np.asarray(g, dtype=float), U)
    return h_t, g_t
