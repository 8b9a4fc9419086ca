"""Symmetry sectors of particle-number and spin-projection conserving Hamiltonians.

A sector is labelled by the spin-up / spin-down electron counts
``(n_alpha, n_beta)``.  Without magnetic fields or spin-orbit coupling the
spectra of mirror sectors ``(a, b)`` and ``(b, a)`` are degenerate, so the
canonical enumeration keeps only ``n_alpha >= n_beta``.
"""

from __future__ import annotations

from dataclasses import dataclass


class SectorError(ValueError):
    """Sector incompatible with the orbital count."""


@dataclass(frozen=True, order=True)
class SymmetrySector:
    """Electron-count labels of an (N, S_z) symmetry sector."""

    n_alpha: int
    n_beta: int

    @property
    def eta(self) -> int:
        """Total electron count."""
        return self.n_alpha + self.n_beta

    @property
    def spin(self) -> float:
        """Spin quantum number s = |n_alpha - n_beta| / 2 (ROHF relation)."""
        return abs(self.n_alpha - self.n_beta) / 2.0

    @property
    def m_s(self) -> float:
        return (self.n_alpha - self.n_beta) / 2.0

    def s_squared(self) -> float:
        """Single-determinant <S^2> value, s(s + 1)."""
        s = self.spin
        return s * (s + 1.0)

    def mirror(self) -> "SymmetrySector":
        return SymmetrySector(self.n_beta, self.n_alpha)

    def canonical(self) -> "SymmetrySector":
        """Representative with n_alpha >= n_beta."""
        if self.n_alpha >= self.n_beta:
            return self
        return self.mirror()

    def validate(self, n_orb: int) -> "SymmetrySector":
        if not (0 <= self.n_alpha <= n_orb and 0 <= self.n_beta <= n_orb):
            raise SectorError(
                f"sector ({self.n_alpha},{self.n_beta}) out of range for "
                f"{n_orb} orbitals"
            )
        return self

    def label(self) -> str:
        return f"{self.n_alpha},{self.n_beta}"

    @classmethod
    def from_label(cls, text: str) -> "SymmetrySector":
        parts = text.replace("(", "").replace(")", "").split(",")
        if len(parts) != 2:
            raise SectorError(f"cannot parse sector label {text!r}")
        try:
            a, b = (int(p) for p in parts)
        except ValueError as exc:
            raise SectorError(f"cannot parse sector label {text!r}") from exc
        return cls(a, b)


def sector_count(n_orb: int) -> int:
    """Number of symmetry sectors with unique spectra, (N+1)(N+2)/2."""
    if n_orb < 0:
        raise ValueError("n_orb must be non-negative")
    return (n_orb + 1) * (n_orb + 2) // 2


def canonical_sectors(n_orb: int) -> list[SymmetrySector]:
    """All sectors with n_alpha >= n_beta, in lexicographic order."""
    return [
        SymmetrySector(a, b)
        for a in range(n_orb + 1)
        for b in range(a + 1)
    ]


def all_sectors(n_orb: int) -> list[SymmetrySector]:
    """Full (n_alpha, n_beta) grid, mirrors included."""
    return [
        SymmetrySector(a, b)
        for a in range(n_orb + 1)
        for b in range(n_orb + 1)
    ]
