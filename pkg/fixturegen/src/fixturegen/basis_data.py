"""Frozen STO-NG expansions and per-element shell construction.

The zeta=1 tables below were produced by basis_fit.emit_frozen_table (the
classic shared-exponent least-squares construction); a test re-derives them
and checks them against the published STO-3G values and the hydrogen STO-6G
exponents.  Element basis sets scale the exponents by the standard molecular
Slater zetas; contraction coefficients are scale invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

# STO3G: zeta=1 fits, overlaps 1s=0.999834736, 2s=0.999678855, 2p=0.999819820
STO3G_1S_ALPHA = (2.2276607543e+00, 4.0577114939e-01, 1.0981750974e-01)
STO3G_1S_COEF = (1.5432896535e-01, 5.3532815532e-01, 4.4463453241e-01)
STO3G_2SP_ALPHA = (9.9420273989e-01, 2.3103130822e-01, 7.5138554915e-02)
STO3G_2SP_COEF_S = (-9.9967222807e-02, 3.9951288734e-01, 7.0011540421e-01)
STO3G_2SP_COEF_P = (1.5591629586e-01, 6.0768376299e-01, 3.9195733005e-01)

# STO6G: zeta=1 fits, overlaps 1s=0.999999381, 2s=0.999998993, 2p=0.999999391
STO6G_1S_ALPHA = (2.3103104618e+01, 4.2359247899e+00, 1.1850588383e+00, 4.0709958589e-01, 1.5808865297e-01, 6.5109614164e-02)
STO6G_1S_COEF = (9.1635674931e-03, 4.9361375567e-02, 1.6853800402e-01, 3.7056247381e-01, 4.1649184979e-01, 1.3033453793e-01)
STO6G_2SP_ALPHA = (1.0308703501e+01, 2.0403601766e+00, 6.3414234367e-01, 2.4397751399e-01, 1.0595962809e-01, 4.8569061243e-02)
STO6G_2SP_COEF_S = (-1.3252779522e-02, -4.6991704513e-02, -3.3785417765e-02, 2.5024143220e-01, 5.9511692307e-01, 2.4070688497e-01)
STO6G_2SP_COEF_P = (3.7596908305e-03, 3.7679368087e-02, 1.7389664302e-01, 4.1803609015e-01, 4.2585965567e-01, 1.0170863736e-01)

# standard molecular Slater exponents (zeta_1s, zeta_2sp)
ELEMENT_ZETA = {
    "H": (1.24, None),
    "He": (1.69, None),
    "Li": (2.69, 0.80),
    "Be": (3.68, 1.15),
    "B": (4.68, 1.45),
    "C": (5.67, 1.72),
    "N": (6.67, 1.95),
    "O": (7.66, 2.25),
    "F": (8.65, 2.55),
}

ATOMIC_NUMBER = {
    "H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5,
    "C": 6, "N": 7, "O": 8, "F": 9,
}


@dataclass(frozen=True)
class Shell:
    """One contracted shell: 'S' (one function) or 'SP' (s + px,py,pz)."""

    kind: str
    alphas: tuple[float, ...]
    coef_s: tuple[float, ...]
    coef_p: tuple[float, ...] | None = None


_TABLES = {
    "sto-3g": (
        STO3G_1S_ALPHA, STO3G_1S_COEF,
        STO3G_2SP_ALPHA, STO3G_2SP_COEF_S, STO3G_2SP_COEF_P,
    ),
    "sto-6g": (
        STO6G_1S_ALPHA, STO6G_1S_COEF,
        STO6G_2SP_ALPHA, STO6G_2SP_COEF_S, STO6G_2SP_COEF_P,
    ),
}


class BasisError(ValueError):
    pass


def available_bases() -> tuple[str, ...]:
    return tuple(sorted(_TABLES))


def element_shells(element: str, basis: str) -> list[Shell]:
    key = basis.strip().lower()
    if key not in _TABLES:
        raise BasisError(
            f"basis {basis!r} not recognized; available: {', '.join(available_bases())}"
        )
    if element not in ELEMENT_ZETA:
        raise BasisError(f"element {element!r} not in the basis table")
    a1, c1, asp, cs, cp = _TABLES[key]
    zeta1, zeta2 = ELEMENT_ZETA[element]
    shells = [
        Shell(
            kind="S",
            alphas=tuple(a * zeta1**2 for a in a1),
            coef_s=c1,
        )
    ]
    if zeta2 is not None:
        shells.append(
            Shell(
                kind="SP",
                alphas=tuple(a * zeta2**2 for a in asp),
                coef_s=cs,
                coef_p=cp,
            )
        )
    return shells
