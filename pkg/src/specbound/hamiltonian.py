"""Core Hamiltonian containers and tensor-symmetry validation.

The second-quantized Hamiltonian is stored over spatial orbitals as an
energy constant ``e_const``, a symmetric one-electron matrix ``h`` and a
two-electron tensor ``g`` in chemist convention (pq|rs) with 8-fold
permutational symmetry.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

SYMMETRY_TOL = 1e-12


class HamiltonianError(ValueError):
    """Invalid Hamiltonian data."""


class TensorSymmetryError(HamiltonianError):
    """Tensor violates its required permutational symmetry."""


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SpinFreeHamiltonian:
    """Immutable (e_const, h_pq, g_pqrs) triple in Hartree.

    ``g`` follows chemist convention: g[p, q, r, s] = (pq|rs).  Instances
    are safe to share across threads; the arrays are read-only views.
    """

    n_orb: int
    e_const: float
    h: np.ndarray
    g: np.ndarray
    provenance: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_arrays(
        cls,
        e_const: float,
        h: np.ndarray,
        g: np.ndarray,
        provenance: Mapping[str, Any] | None = None,
        validate: bool = True,
    ) -> "SpinFreeHamiltonian":
        h = np.asarray(h, dtype=float)
        g = np.asarray(g, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise HamiltonianError(f"h must be square, got shape {h.shape}")
        n = h.shape[0]
        if g.shape != (n, n, n, n):
            raise HamiltonianError(
                f"g shape {g.shape} inconsistent with {n} orbitals"
            )
        ham = cls(
            n_orb=n,
            e_const=float(e_const),
            h=_frozen(h),
            g=_frozen(g),
            provenance=dict(provenance or {}),
        )
        if validate:
            report = validate_tensor_symmetry(ham)
            if not report.passed:
                raise TensorSymmetryError(report.describe())
        return ham

    def negated(self) -> "SpinFreeHamiltonian":
        """(-h, -g) with zero constant; used for maximization scans."""
        return SpinFreeHamiltonian(
            n_orb=self.n_orb,
            e_const=0.0,
            h=_frozen(-self.h),
            g=_frozen(-self.g),
            provenance={**self.provenance, "negated": True},
        )

    def shifted(self, c: float) -> "SpinFreeHamiltonian":
        return SpinFreeHamiltonian(
            n_orb=self.n_orb,
            e_const=self.e_const + float(c),
            h=self.h,
            g=self.g,
            provenance=dict(self.provenance),
        )

    def is_one_body(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.g) <= tol))

    def checksum(self) -> str:
        """Content hash over (e_const, h, g); independent of provenance."""
        m = hashlib.sha256()
        m.update(np.float64(self.e_const).tobytes())
        m.update(np.ascontiguousarray(self.h).tobytes())
        m.update(np.ascontiguousarray(self.g).tobytes())
        return m.hexdigest()


@dataclass(frozen=True)
class AOBundle:
    """Atomic-orbital integrals plus the overlap matrix S.

    Carrier for the pre-orthogonalization inputs: S must be symmetric
    positive definite; h_ao symmetric; g_ao 8-fold symmetric.
    """

    n_ao: int
    e_const: float
    S: np.ndarray
    h_ao: np.ndarray
    g_ao: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_arrays(
        cls,
        e_const: float,
        S: np.ndarray,
        h_ao: np.ndarray,
        g_ao: np.ndarray,
        meta: Mapping[str, Any] | None = None,
        min_eig: float = 1e-10,
    ) -> "AOBundle":
        S = np.asarray(S, dtype=float)
        h_ao = np.asarray(h_ao, dtype=float)
        g_ao = np.asarray(g_ao, dtype=float)
        n = S.shape[0]
        if S.shape != (n, n) or h_ao.shape != (n, n):
            raise HamiltonianError("S and h must be square with equal size")
        if g_ao.shape != (n, n, n, n):
            raise HamiltonianError(
                f"g shape {g_ao.shape} inconsistent with {n} AOs"
            )
        for name, arr in (("S", S), ("h", h_ao), ("g", g_ao)):
            if not np.all(np.isfinite(arr)):
                raise HamiltonianError(f"{name} contains non-finite entries")
        if _max_dev(S, S.T)[0] > SYMMETRY_TOL:
            raise TensorSymmetryError("overlap matrix S is not symmetric")
        if _max_dev(h_ao, np.swapaxes(h_ao, 0, 1))[0] > SYMMETRY_TOL:
            raise TensorSymmetryError("h_ao is not symmetric")
        dev, idx = _g_symmetry_deviation(g_ao)
        if dev > SYMMETRY_TOL:
            raise TensorSymmetryError(
                f"g_ao violates 8-fold symmetry by {dev:.3e} at {idx}"
            )
        lowest = float(np.linalg.eigvalsh(S)[0])
        if lowest < min_eig:
            raise HamiltonianError(
                f"overlap not positive definite: lowest eigenvalue {lowest:.6e}"
            )
        return cls(
            n_ao=n,
            e_const=float(e_const),
            S=_frozen(S),
            h_ao=_frozen(h_ao),
            g_ao=_frozen(g_ao),
            meta=dict(meta or {}),
        )


def _max_dev(a: np.ndarray, b: np.ndarray) -> tuple[float, tuple[int, ...]]:
    diff = np.abs(a - b)
    flat = int(np.argmax(diff))
    idx = np.unravel_index(flat, diff.shape)
    return float(diff[idx]), tuple(int(i) for i in idx)


def _g_symmetry_deviation(g: np.ndarray) -> tuple[float, tuple[int, ...]]:
    worst, where = 0.0, (0, 0, 0, 0)
    for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
        dev, idx = _max_dev(g, np.transpose(g, perm))
        if dev > worst:
            worst, where = dev, idx
    return worst, where


@dataclass(frozen=True)
class SymmetryReport:
    """Per-class maximum deviations from the required tensor symmetries."""

    h_symmetric: float
    g_pair_one: float
    g_pair_two: float
    g_pair_swap: float
    worst_index: tuple[int, ...]
    finite: bool
    tol: float = SYMMETRY_TOL

    @property
    def passed(self) -> bool:
        return self.finite and all(
            d <= self.tol
            for d in (self.h_symmetric, self.g_pair_one, self.g_pair_two, self.g_pair_swap)
        )

    def describe(self) -> str:
        if self.passed:
            return "all tensor symmetries satisfied"
        if not self.finite:
            return "tensor contains non-finite entries"
        lines = []
        for name, dev in (
            ("h_pq = h_qp", self.h_symmetric),
            ("g_pqrs = g_qprs", self.g_pair_one),
            ("g_pqrs = g_pqsr", self.g_pair_two),
            ("g_pqrs = g_rspq", self.g_pair_swap),
        ):
            if dev > self.tol:
                lines.append(f"{name} violated by {dev:.3e} at index {self.worst_index}")
        return "; ".join(lines)


def validate_tensor_symmetry(ham: SpinFreeHamiltonian) -> SymmetryReport:
    """Check h symmetry and the three generators of the 8-fold g symmetry."""
    finite = bool(
        np.isfinite(ham.e_const)
        and np.all(np.isfinite(ham.h))
        and np.all(np.isfinite(ham.g))
    )
    h_dev, h_idx = _max_dev(ham.h, ham.h.T)
    devs = []
    worst, where = h_dev, h_idx
    for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
        dev, idx = _max_dev(ham.g, np.transpose(ham.g, perm))
        devs.append(dev)
        if dev > worst:
            worst, where = dev, idx
    return SymmetryReport(
        h_symmetric=h_dev,
        g_pair_one=devs[0],
        g_pair_two=devs[1],
        g_pair_swap=devs[2],
        worst_index=where,
        finite=finite,
    )


def eightfold_images(p: int, q: int, r: int, s: int) -> set[tuple[int, int, int, int]]:
    """All index quadruples equivalent to (p, q, r, s) under 8-fold symmetry."""
    return {
        (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
        (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
    }


def pair_index(p: int, q: int) -> int:
    """Canonical composite index of an unordered orbital pair (p >= q)."""
    if p < q:
        p, q = q, p
    return p * (p + 1) // 2 + q


def canonical_quadruple(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    """Representative quadruple: p >= q, r >= s, pair_index(pq) >= pair_index(rs)."""
    if p < q:
        p, q = q, p
    if r < s:
        r, s = s, r
    if pair_index(p, q) < pair_index(r, s):
        p, q, r, s = r, s, p, q
    return p, q, r, s
