import numpy as np
import pytest

from fixturegen.basis_data import (
    BasisError,
    STO3G_1S_ALPHA,
    STO3G_1S_COEF,
    STO3G_2SP_ALPHA,
    STO6G_1S_ALPHA,
    element_shells,
)

# classic published STO-3G zeta=1 expansions
PUBLISHED_3G_1S_ALPHA = (2.227660584, 0.4057711562, 0.1098175104)
PUBLISHED_3G_1S_COEF = (0.1543289673, 0.5353281423, 0.4446345422)
PUBLISHED_3G_2SP_ALPHA = (0.9942027220, 0.2310313333, 0.0751386013)
# hydrogen STO-6G leading exponent (zeta = 1.24)
PUBLISHED_H_6G_FIRST = 35.52322122


def test_frozen_3g_matches_published_values():
    assert np.allclose(STO3G_1S_ALPHA, PUBLISHED_3G_1S_ALPHA, rtol=2e-5)
    assert np.allclose(STO3G_1S_COEF, PUBLISHED_3G_1S_COEF, rtol=2e-5)
    assert np.allclose(STO3G_2SP_ALPHA, PUBLISHED_3G_2SP_ALPHA, rtol=2e-4)


def test_frozen_6g_hydrogen_anchor():
    scaled = STO6G_1S_ALPHA[0] * 1.24**2
    assert scaled == pytest.approx(PUBLISHED_H_6G_FIRST, rel=1e-5)


def test_element_shell_structure():
    h = element_shells("H", "sto-6g")
    assert len(h) == 1 and h[0].kind == "S" and len(h[0].alphas) == 6
    o = element_shells("O", "sto-6g")
    assert [s.kind for s in o] == ["S", "SP"]
    # oxygen 1s scaling: zeta = 7.66
    assert o[0].alphas[0] == pytest.approx(STO6G_1S_ALPHA[0] * 7.66**2, rel=1e-12)


def test_unknown_basis_or_element_rejected():
    with pytest.raises(BasisError, match="available"):
        element_shells("H", "cc-pvdz")
    with pytest.raises(BasisError):
        element_shells("Xe", "sto-6g")


@pytest.mark.slow
def test_refit_reproduces_frozen_tables():
    from fixturegen.basis_fit import fit_1s

    alphas, coefs, overlap = fit_1s(3)
    assert np.allclose(alphas, STO3G_1S_ALPHA, rtol=1e-4)
    assert np.allclose(coefs, STO3G_1S_COEF, rtol=1e-4)
    assert overlap > 0.99983
