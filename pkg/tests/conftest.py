import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from specbound import SpinFreeHamiltonian

FIXTURE_DIR = Path(__file__).parent.parent / "fixtures"


def symmetrize_g(raw: np.ndarray) -> np.ndarray:
    g = raw + raw.transpose(1, 0, 2, 3)
    g = g + g.transpose(0, 1, 3, 2)
    g = g + g.transpose(2, 3, 0, 1)
    return g


def random_hamiltonian(
    rng: np.random.Generator,
    n_orb: int,
    g_scale: float = 0.4,
    e_const: float | None = None,
) -> SpinFreeHamiltonian:
    h = rng.standard_normal((n_orb, n_orb))
    h = 0.5 * (h + h.T)
    g = symmetrize_g(rng.standard_normal((n_orb,) * 4) * g_scale)
    e0 = float(rng.standard_normal()) if e_const is None else e_const
    return SpinFreeHamiltonian.from_arrays(e0, h, g)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def fixture_path(*parts: str) -> Path:
    return FIXTURE_DIR.joinpath(*parts)


def require_fixture(*parts: str) -> Path:
    path = fixture_path(*parts)
    if not path.exists():
        pytest.skip(f"fixture not generated: {path}")
    return path
