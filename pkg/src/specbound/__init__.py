"""Symmetry-aware spectral bounds for second-quantized electronic Hamiltonians."""

__version__ = "0.1.0"

from .hamiltonian import AOBundle, SpinFreeHamiltonian, validate_tensor_symmetry
from .sectors import SymmetrySector, canonical_sectors, sector_count
from .fcidump import parse_fcidump, write_fcidump, suggested_sector
from .aojson import parse_ao_bundle, write_ao_bundle, lowdin_orthogonalize
from .majorana import (
    MajoranaSplit,
    majorana_split,
    one_body_sector_gap,
    one_body_seminorm,
)
from .double_factorization import (
    DoubleFactorization,
    double_factorize,
    two_body_df_sector_bound,
)
from .orbital_rotation import OrbitalRotation, expm_antisymmetric, transform_integrals
from .hf_optimizer import (
    OptimizerSettings,
    SectorExtremum,
    hf_energy,
    hf_gradient,
    maximize_sector,
    minimize_sector,
)
from .fci import (
    DeterminantBasis,
    SpectrumResult,
    apply_hamiltonian,
    enumerate_determinants,
    extremal_eigenvalues,
    s2_matrix_element,
)
from .bounds import (
    BoundsReport,
    IncoherentBounds,
    SectorSpectrumTable,
    assemble_bounds,
    incoherent_bounds,
    scan_sectors,
)
from .scaling import FitResult, SeriesPoint, build_series, emit_plotdata, fit_power_law
