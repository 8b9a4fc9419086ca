"""Closed-shell restricted Hartree-Fock with DIIS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .molecule import IntegralSet


class SCFError(RuntimeError):
    pass


@dataclass(frozen=True)
class SCFResult:
    energy: float
    mo_coeff: np.ndarray
    mo_energy: np.ndarray
    converged: bool
    iterations: int


def _fock(h: np.ndarray, g: np.ndarray, D: np.ndarray) -> np.ndarray:
    J = np.tensordot(g, D, axes=([2, 3], [0, 1]))
    K = np.tensordot(g, D, axes=([1, 2], [0, 1]))
    return h + 2.0 * J - K


def restricted_hartree_fock(
    ints: IntegralSet,
    n_electrons: int,
    max_iter: int = 200,
    e_tol: float = 1e-11,
    d_tol: float = 1e-9,
    diis_depth: int = 8,
) -> SCFResult:
    """RHF in a (possibly non-orthogonal) AO basis.

    D is the closed-shell density of doubly occupied orbitals (trace =
    n_electrons / 2); total energy includes the nuclear repulsion.
    """
    if n_electrons % 2 != 0:
        raise SCFError("restricted SCF needs an even electron count")
    n_occ = n_electrons // 2
    if n_occ > ints.n_ao:
        raise SCFError("more electron pairs than basis functions")

    S, h, g = ints.S, ints.h, ints.g
    w, V = np.linalg.eigh(S)
    X = (V / np.sqrt(w)) @ V.T

    def solve(F):
        Fp = X @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        return eps, C

    eps, C = solve(h)
    D = C[:, :n_occ] @ C[:, :n_occ].T
    energy = np.inf
    fock_hist: list[np.ndarray] = []
    err_hist: list[np.ndarray] = []
    converged = False
    it = 0

    for it in range(1, max_iter + 1):
        F = _fock(h, g, D)
        err = F @ D @ S - S @ D @ F
        fock_hist.append(F)
        err_hist.append(err)
        if len(fock_hist) > diis_depth:
            fock_hist.pop(0)
            err_hist.pop(0)
        if len(fock_hist) > 1:
            m = len(fock_hist)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    B[i, j] = np.sum(err_hist[i] * err_hist[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            coeff, *_ = np.linalg.lstsq(B, rhs, rcond=None)
            F = sum(c * Fi for c, Fi in zip(coeff[:m], fock_hist))

        eps, C = solve(F)
        D_new = C[:, :n_occ] @ C[:, :n_occ].T
        e_new = float(np.sum(D_new * (h + _fock(h, g, D_new)))) + ints.e_nuc
        d_err = float(np.max(np.abs(err)))
        if abs(e_new - energy) < e_tol and d_err < d_tol:
            energy, D = e_new, D_new
            converged = True
            break
        energy, D = e_new, D_new

    if not converged:
        raise SCFError(f"SCF not converged after {max_iter} iterations")
    return SCFResult(
        energy=energy, mo_coeff=C, mo_energy=eps, converged=converged, iterations=it
    )


def mo_integrals(ints: IntegralSet, C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(h, g) transformed to the molecular orbital basis."""
    h_mo = C.T @ ints.h @ C
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", ints.g, C, C, C, C, optimize=True)
    return h_mo, g_mo
