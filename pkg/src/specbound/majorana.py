"""Majorana one-body/two-body split and exact one-body sector quantities.

Rewriting the electronic Hamiltonian over Majorana operators separates it
into a core constant, a one-body term governed by the dressed one-electron
matrix kappa_pq, and a residual two-body term.  Re-expanding those pieces in
ordinary second quantization gives three Hamiltonian-shaped components that
sum back to the original operator:

    core      = E_nuc + sum_p h_pp + 1/2 sum_pr g_pprr - 1/2 sum_pr g_prrp
    kappa_pq  = h_pq - 1/2 sum_r g_prrq + sum_r g_pqrr
    one-body  = sum_{pq,sigma} kappa_pq a+_p a_q  -  tr(kappa)
    two-body  = (ordinary two-electron operator of g)
                + sum_{pq,sigma} m_pq a+_p a_q + 1/2 sum_pr g_pprr,
                with m_pq = 1/2 sum_r g_prrq - sum_r g_pqrr

The re-expansion constants and m_pq follow from normal-ordering the Majorana
strings; they cancel kappa's dressing exactly, which is checked termwise and
spectrally in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import SpinFreeHamiltonian
from .sectors import SymmetrySector


@dataclass(frozen=True)
class MajoranaSplit:
    """Core energy, dressed one-electron matrix, and re-expanded components."""

    e_core: float
    kappa: np.ndarray
    g: np.ndarray
    one_body: SpinFreeHamiltonian
    two_body: SpinFreeHamiltonian

    @property
    def n_orb(self) -> int:
        return self.kappa.shape[0]


def dressed_one_electron_matrix(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """kappa_pq = h_pq - 1/2 sum_r g_prrq + sum_r g_pqrr."""
    return h - 0.5 * np.einsum("prrq->pq", g) + np.einsum("pqrr->pq", g)


def majorana_split(ham: SpinFreeHamiltonian) -> MajoranaSplit:
    h, g = ham.h, ham.g
    trace_coulomb = float(np.einsum("pprr->", g))
    trace_exchange = float(np.einsum("prrp->", g))
    e_core = ham.e_const + float(np.trace(h)) + 0.5 * trace_coulomb - 0.5 * trace_exchange

    kappa = dressed_one_electron_matrix(h, g)
    one_body = SpinFreeHamiltonian.from_arrays(
        e_const=-float(np.trace(kappa)),
        h=kappa,
        g=np.zeros_like(g),
        provenance={"component": "majorana-one-body"},
        validate=False,
    )
    m = 0.5 * np.einsum("prrq->pq", g) - np.einsum("pqrr->pq", g)
    two_body = SpinFreeHamiltonian.from_arrays(
        e_const=0.5 * trace_coulomb,
        h=m,
        g=g,
        provenance={"component": "majorana-two-body"},
        validate=False,
    )
    kappa_frozen = kappa.copy()
    kappa_frozen.setflags(write=False)
    return MajoranaSplit(
        e_core=e_core,
        kappa=kappa_frozen,
        g=ham.g,
        one_body=one_body,
        two_body=two_body,
    )


def _fill_sums(lam: np.ndarray, sector: SymmetrySector) -> tuple[float, float]:
    """(bottom fill, top fill) of ascending eigenvalues over both spin channels."""
    n = lam.size
    bottom = 0.0
    top = 0.0
    for eta in (sector.n_alpha, sector.n_beta):
        bottom += float(lam[:eta].sum())
        top += float(lam[n - eta:].sum()) if eta > 0 else 0.0
    return bottom, top


def one_body_sector_gap(kappa: np.ndarray, sector: SymmetrySector) -> float:
    """Exact half spectral range of the one-body Hamiltonian in a sector.

    With lambda the ascending eigenvalues of kappa, the extremal eigenvalues
    are the bottom and top fillings of eta_sigma orbitals per spin channel.
    """
    kappa = np.asarray(kappa, dtype=float)
    sector.validate(kappa.shape[0])
    lam = np.linalg.eigvalsh(kappa)
    bottom, top = _fill_sums(lam, sector)
    return 0.5 * (top - bottom)


def one_body_sector_extremes(
    one_body: SpinFreeHamiltonian, sector: SymmetrySector
) -> tuple[float, float]:
    """Closed-form (e_min, e_max) of a Hamiltonian with no two-electron part."""
    if not one_body.is_one_body():
        raise ValueError("closed-form extremes require a vanishing two-electron tensor")
    sector.validate(one_body.n_orb)
    lam = np.linalg.eigvalsh(one_body.h)
    bottom, top = _fill_sums(lam, sector)
    return one_body.e_const + bottom, one_body.e_const + top


def seminorm_from_spectrum(lam: np.ndarray, sector: SymmetrySector) -> float:
    """Semi-norm from an ascending one-body spectrum.

    Per spin channel this is the larger of the two deviations of the bottom
    and top fillings from half the eigenvalue sum, summed over channels.
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    half_sum = 0.5 * float(lam.sum())
    total = 0.0
    for eta in (sector.n_alpha, sector.n_beta):
        bottom = float(lam[:eta].sum())
        top = float(lam[n - eta:].sum()) if eta > 0 else 0.0
        total += max(abs(half_sum - bottom), abs(half_sum - top))
    return total


def one_body_seminorm(kappa: np.ndarray, sector: SymmetrySector) -> float:
    """Fermionic semi-norm of the one-body Majorana term in a sector."""
    kappa = np.asarray(kappa, dtype=float)
    sector.validate(kappa.shape[0])
    return seminorm_from_spectrum(np.linalg.eigvalsh(kappa), sector)
