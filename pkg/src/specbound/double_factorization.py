"""Two-stage eigendecomposition of the two-electron tensor.

The (pq),(rs) matrix unfolding of g is eigendecomposed; every eigenvalue
above the truncation threshold contributes a leaf.  The reshaped eigenvector
is symmetric (it lives in the symmetric subspace for any 8-fold symmetric g)
and is eigendecomposed in turn, giving the leaf spectrum alpha and the
orbital rotation U of that leaf:

    g_pqrs = sum_t sign_t sum_kl alpha^t_k alpha^t_l
             U^t_pk U^t_qk U^t_rl U^t_sl

Numerically indefinite tensors can produce negative unfolding eigenvalues;
those leaves are kept with an explicit sign so reconstruction stays exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from .majorana import seminorm_from_spectrum
from .sectors import SymmetrySector

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class DFLeaf:
    """One factorization leaf: eigenvalues alpha, orthogonal U, weight sign."""

    alpha: np.ndarray
    U: np.ndarray
    sign: int = 1


@dataclass(frozen=True)
class DoubleFactorization:
    leaves: tuple[DFLeaf, ...]
    truncation_tol: float
    reconstruction_error: float
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def rank(self) -> int:
        return len(self.leaves)


def reconstruct(df: DoubleFactorization, n_orb: int) -> np.ndarray:
    g = np.zeros((n_orb, n_orb, n_orb, n_orb))
    for leaf in df.leaves:
        V = (leaf.U * leaf.alpha) @ leaf.U.T
        g += leaf.sign * np.multiply.outer(V, V)
    return g


def double_factorize(g: np.ndarray, tol: float = 1e-10) -> DoubleFactorization:
    """Factorize an 8-fold symmetric two-electron tensor into DF leaves.

    Eigenvalues of the unfolded matrix with magnitude <= tol * max|g| are
    truncated; the reconstruction error is reported against the same scale.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    scale = float(np.max(np.abs(g))) if g.size else 0.0
    if scale == 0.0:
        return DoubleFactorization(leaves=(), truncation_tol=tol, reconstruction_error=0.0)

    G = g.reshape(n * n, n * n)
    w, vecs = np.linalg.eigh(G)
    order = np.argsort(np.abs(w))[::-1]

    leaves: list[DFLeaf] = []
    warnings: list[str] = []
    cutoff = tol * scale
    for idx in order:
        weight = w[idx]
        if abs(weight) <= cutoff:
            break
        V = vecs[:, idx].reshape(n, n)
        asym = float(np.max(np.abs(V - V.T)))
        if asym > 1e-4:
            raise RuntimeError(
                f"reshaped eigenvector not symmetric (deviation {asym:.3e}); "
                "input tensor lacks 8-fold symmetry"
            )
        # small asymmetry is null-space mixing on near-zero eigenvalues
        # (antisymmetric matrices span part of the kernel); discard it
        V = 0.5 * (V + V.T)
        sign = 1
        if weight < 0:
            sign = -1
            warnings.append(
                f"negative unfolding eigenvalue {weight:.6e} kept with explicit sign"
            )
        lam, U = np.linalg.eigh(V)
        alpha = lam * np.sqrt(abs(weight))
        alpha.setflags(write=False)
        U = np.ascontiguousarray(U)
        U.setflags(write=False)
        leaves.append(DFLeaf(alpha=alpha, U=U, sign=sign))

    df = DoubleFactorization(
        leaves=tuple(leaves),
        truncation_tol=tol,
        reconstruction_error=0.0,
        warnings=tuple(warnings),
    )
    err = float(np.max(np.abs(g - reconstruct(df, n))))
    return DoubleFactorization(
        leaves=df.leaves,
        truncation_tol=tol,
        reconstruction_error=err,
        warnings=df.warnings,
    )


def two_body_df_sector_bound(df: DoubleFactorization, sector: SymmetrySector) -> float:
    """Upper bound on the two-body sector half-range, 1/4 sum_t ||v_t||_mu^2.

    Each leaf's one-body semi-norm is evaluated on the sorted leaf spectrum;
    squaring makes the leaf sign irrelevant.
    """
    total = 0.0
    for leaf in df.leaves:
        norm = seminorm_from_spectrum(np.sort(leaf.alpha), sector)
        total += norm * norm
    return 0.25 * total


def dump_df_json(df: DoubleFactorization, target: str | Path | IO[str]) -> None:
    doc = {
        "truncation_tol": df.truncation_tol,
        "reconstruction_error": df.reconstruction_error,
        "warnings": list(df.warnings),
        "leaves": [
            {
                "sign": leaf.sign,
                "alpha": leaf.alpha.tolist(),
                "U": leaf.U.ravel().tolist(),
            }
            for leaf in df.leaves
        ],
    }
    text = json.dumps(doc)
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
