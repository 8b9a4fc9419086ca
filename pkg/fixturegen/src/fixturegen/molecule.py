"""Molecular geometry and AO basis assembly.

Geometries are given in Angstrom and converted to Bohr; AO functions are
ordered atom by atom, shell by shell, with an SP shell contributing its s
function followed by px, py, pz.  Contraction coefficients are premultiplied
by Cartesian primitive norms and rescaled so every contracted function is
unit normalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis_data import ATOMIC_NUMBER, BasisError, element_shells
from .integrals import (
    electron_repulsion,
    nuclear_attraction,
    overlap_kinetic,
)

ANGSTROM_TO_BOHR = 1.8897261246257702


def _double_factorial(n: int) -> float:
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def _primitive_norm(alpha: float, lmn: tuple[int, int, int]) -> float:
    l, m, n = lmn
    L = l + m + n
    pref = (2.0 * alpha / np.pi) ** 0.75
    num = (4.0 * alpha) ** (L / 2.0)
    den = np.sqrt(
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return pref * num / den


@dataclass
class AOBasis:
    """Flat per-AO-function arrays in Bohr, ready for the integral kernels."""

    labels: list[str]
    centers: np.ndarray
    lmn: np.ndarray
    nprim: np.ndarray
    alphas: np.ndarray
    coefs: np.ndarray

    @property
    def n_ao(self) -> int:
        return len(self.labels)


@dataclass
class Molecule:
    atoms: list[tuple[str, tuple[float, float, float]]]
    basis: str
    charge: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.atoms:
            raise BasisError("geometry needs at least one atom")
        for element, _ in self.atoms:
            if element not in ATOMIC_NUMBER:
                raise BasisError(f"unknown element {element!r}")

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[e] for e, _ in self.atoms) - self.charge

    def coords_bohr(self) -> np.ndarray:
        return np.array([xyz for _, xyz in self.atoms]) * ANGSTROM_TO_BOHR

    def charges(self) -> np.ndarray:
        return np.array([float(ATOMIC_NUMBER[e]) for e, _ in self.atoms])

    def nuclear_repulsion(self) -> float:
        xyz = self.coords_bohr()
        z = self.charges()
        e = 0.0
        for i in range(len(z)):
            for j in range(i):
                e += z[i] * z[j] / np.linalg.norm(xyz[i] - xyz[j])
        return e

    def ao_basis(self) -> AOBasis:
        labels: list[str] = []
        centers: list[np.ndarray] = []
        lmns: list[tuple[int, int, int]] = []
        prim_alphas: list[tuple[float, ...]] = []
        prim_coefs: list[np.ndarray] = []

        xyz = self.coords_bohr()
        for atom_idx, (element, _) in enumerate(self.atoms):
            for shell_no, shell in enumerate(element_shells(element, self.basis)):
                parts = [("s", shell.coef_s, (0, 0, 0))]
                if shell.kind == "SP":
                    parts += [
                        ("px", shell.coef_p, (1, 0, 0)),
                        ("py", shell.coef_p, (0, 1, 0)),
                        ("pz", shell.coef_p, (0, 0, 1)),
                    ]
                for name, coefs, lmn in parts:
                    labels.append(f"{element}{atom_idx}:{shell_no}{name}")
                    centers.append(xyz[atom_idx])
                    lmns.append(lmn)
                    prim_alphas.append(shell.alphas)
                    prim_coefs.append(
                        np.array(
                            [
                                c * _primitive_norm(a, lmn)
                                for a, c in zip(shell.alphas, coefs)
                            ]
                        )
                    )

        n_ao = len(labels)
        max_prim = max(len(a) for a in prim_alphas)
        alphas = np.zeros((n_ao, max_prim))
        coefs = np.zeros((n_ao, max_prim))
        nprim = np.zeros(n_ao, dtype=np.int64)
        for k in range(n_ao):
            m = len(prim_alphas[k])
            nprim[k] = m
            alphas[k, :m] = prim_alphas[k]
            coefs[k, :m] = prim_coefs[k]

        basis = AOBasis(
            labels=labels,
            centers=np.array(centers),
            lmn=np.array(lmns, dtype=np.int64),
            nprim=nprim,
            alphas=alphas,
            coefs=coefs,
        )
        # overall contraction normalization
        S, _ = overlap_kinetic(
            basis.centers, basis.lmn, basis.nprim, basis.alphas, basis.coefs
        )
        basis.coefs = basis.coefs / np.sqrt(np.diag(S))[:, None]
        return basis


@dataclass(frozen=True)
class IntegralSet:
    n_ao: int
    e_nuc: float
    S: np.ndarray
    h: np.ndarray
    g: np.ndarray
    labels: list[str]


def compute_integrals(mol: Molecule) -> IntegralSet:
    basis = mol.ao_basis()
    S, T = overlap_kinetic(
        basis.centers, basis.lmn, basis.nprim, basis.alphas, basis.coefs
    )
    V = nuclear_attraction(
        basis.centers, basis.lmn, basis.nprim, basis.alphas, basis.coefs,
        mol.coords_bohr(), mol.charges(),
    )
    g = electron_repulsion(
        basis.centers, basis.lmn, basis.nprim, basis.alphas, basis.coefs
    )
    return IntegralSet(
        n_ao=basis.n_ao,
        e_nuc=mol.nuclear_repulsion(),
        S=S,
        h=T + V,
        g=g,
        labels=basis.labels,
    )
