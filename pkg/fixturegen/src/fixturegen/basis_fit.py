"""Least-squares STO-NG construction: N Gaussians fitted to zeta=1 Slater orbitals.

The 1s expansion maximizes the overlap with the normalized 1s Slater
function; the 2s/2p expansion shares one exponent set and maximizes the sum
of the two channel overlaps.  Scaled element sets follow by multiplying the
exponents with zeta^2 (contraction coefficients are scale invariant).  The
frozen tables in basis_data were produced by these routines; a test
re-derives them and pins them against the classic published values.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln
from scipy.optimize import minimize

# breakpoints force quad to resolve narrow Gaussians near the origin
_QUAD_POINTS = (1e-4, 1e-3, 1e-2, 1e-1, 1.0, 5.0, 20.0)


def _moment(n: float, a: float) -> float:
    """int_0^inf r^n exp(-a r^2) dr, closed form."""
    return 0.5 * np.exp(gammaln((n + 1) / 2.0) - (n + 1) / 2.0 * np.log(a))


def _gto_norm(alpha: float, l: int) -> float:
    return 1.0 / np.sqrt(_moment(2 * l + 2, 2.0 * alpha))


def slater_radial(shell: str):
    """Normalized zeta=1 Slater radial function for '1s', '2s' or '2p'."""
    if shell == "1s":
        return lambda r: 2.0 * np.exp(-r)
    if shell in ("2s", "2p"):
        # unit norm under the r^2 dr measure: c^2 * 4!/2^5 = 1
        return lambda r: (2.0 / np.sqrt(3.0)) * r * np.exp(-r)
    raise ValueError(f"unsupported Slater shell {shell!r}")


def _sto_gto_overlap(sto, alpha: float, l: int) -> float:
    norm = _gto_norm(alpha, l)
    val, _ = quad(
        lambda r: sto(r) * norm * r ** (l + 2) * np.exp(-alpha * r * r),
        0.0,
        60.0,
        limit=300,
        points=_QUAD_POINTS,
    )
    return val


def _channel(alphas: np.ndarray, sto, l: int) -> tuple[float, np.ndarray]:
    """Best overlap and normalized coefficients for one angular channel."""
    n = alphas.size
    s = np.array([_sto_gto_overlap(sto, a, l) for a in alphas])
    norms = np.array([_gto_norm(a, l) for a in alphas])
    S = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            S[i, j] = S[j, i] = (
                norms[i] * norms[j] * _moment(2 * l + 2, alphas[i] + alphas[j])
            )
    c = np.linalg.solve(S, s)
    overlap = float(np.sqrt(max(s @ c, 0.0)))
    return overlap, c / np.sqrt(c @ S @ c)


_NM_OPTIONS = {"xatol": 1e-13, "fatol": 1e-15, "maxiter": 60000, "maxfev": 120000}


def fit_1s(n_gauss: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Exponents (descending), coefficients and overlap of the 1s fit."""
    sto = slater_radial("1s")

    def neg(logs):
        return -_channel(np.exp(logs), sto, 0)[0]

    x = np.log(np.geomspace(0.06, 25.0, n_gauss))
    for _ in range(2):
        x = minimize(neg, x, method="Nelder-Mead", options=_NM_OPTIONS).x
    alphas = np.sort(np.exp(x))[::-1]
    overlap, coefs = _channel(alphas, sto, 0)
    return alphas, coefs, overlap


def fit_2sp(n_gauss: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, float, float]:
    """Shared-exponent 2s/2p fit: exponents, s and p coefficients, overlaps."""
    sto_s = slater_radial("2s")
    sto_p = slater_radial("2p")

    def neg(logs):
        alphas = np.exp(logs)
        return -(_channel(alphas, sto_s, 0)[0] + _channel(alphas, sto_p, 1)[0])

    x = np.log(np.geomspace(0.04, 12.0, n_gauss))
    for _ in range(2):
        x = minimize(neg, x, method="Nelder-Mead", options=_NM_OPTIONS).x
    alphas = np.sort(np.exp(x))[::-1]
    ov_s, c_s = _channel(alphas, sto_s, 0)
    ov_p, c_p = _channel(alphas, sto_p, 1)
    return alphas, c_s, c_p, ov_s, ov_p


def emit_frozen_table(n_gauss: int) -> str:
    """Render the fit results as Python source for basis_data."""
    a1, c1, ov1 = fit_1s(n_gauss)
    asp, cs, cp, ovs, ovp = fit_2sp(n_gauss)
    tag = f"STO{n_gauss}G"

    def fmt(arr):
        return "(" + ", ".join(f"{x:.10e}" for x in arr) + ")"

    lines = [
        f"# {tag}: zeta=1 fits, overlaps 1s={ov1:.9f}, 2s={ovs:.9f}, 2p={ovp:.9f}",
        f"{tag}_1S_ALPHA = {fmt(a1)}",
        f"{tag}_1S_COEF = {fmt(c1)}",
        f"{tag}_2SP_ALPHA = {fmt(asp)}",
        f"{tag}_2SP_COEF_S = {fmt(cs)}",
        f"{tag}_2SP_COEF_P = {fmt(cp)}",
    ]
    return "\n".join(lines)
