"""Sector scans and assembly of the spectral-bound hierarchy.

A scan produces per-sector extremal energies (e_min, e_max) by one of three
methods: single-determinant orbital optimization (``hf``), exact
diagonalization (``fci``), or the closed-form orbital filling valid when the
two-electron tensor vanishes (``exact1body``).  A report derives the three
bound tiers from one table:

    delta_half    = (max_mu e_max - min_mu e_min) / 2
    delta_s_half  = max_mu (e_max - e_min) / 2
    delta_mu_half = (e_max - e_min) / 2 within one target sector

and the incoherent counterparts add the independently bounded one-body and
two-body pieces of the Majorana split.  Mirror sectors are degenerate, so
scans default to the canonical n_alpha >= n_beta half; a full-grid mode
exists for verification.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import asdict, dataclass, field

from .double_factorization import double_factorize, two_body_df_sector_bound
from .fci import DEFAULT_DENSE_CAP, DEFAULT_DIM_CAP, DimensionCapError, extremal_eigenvalues
from .hamiltonian import SpinFreeHamiltonian
from .hf_optimizer import OptimizerSettings, maximize_sector, minimize_sector
from .majorana import majorana_split, one_body_sector_extremes, one_body_sector_gap
from .sectors import SymmetrySector, all_sectors, canonical_sectors, sector_count

TIE_TOL = 1e-10
SCAN_METHODS = ("hf", "fci", "exact1body")


class BoundsError(RuntimeError):
    pass


class InvariantViolation(BoundsError):
    """A mathematically guaranteed inequality failed beyond tolerance."""


@dataclass(frozen=True)
class SectorEntry:
    e_min: float
    e_max: float
    method: str
    converged: bool = True
    detail: dict = field(default_factory=dict)
    rotations: dict = field(default_factory=dict)


@dataclass
class SectorSpectrumTable:
    n_orb: int
    method: str
    grid: str
    hamiltonian_id: str
    entries: dict[SymmetrySector, SectorEntry]
    settings: dict = field(default_factory=dict)

    def unconverged_sectors(self) -> list[SymmetrySector]:
        return sorted(s for s, e in self.entries.items() if not e.converged)

    def lookup(self, sector: SymmetrySector) -> SectorEntry | None:
        if sector in self.entries:
            return self.entries[sector]
        return self.entries.get(sector.mirror())


@dataclass
class BoundsReport:
    hamiltonian_id: str
    method: str
    target_sector: SymmetrySector
    delta_half: float
    delta_s_half: float
    delta_mu_half: dict[SymmetrySector, float]
    argmax: dict
    unconverged: list[SymmetrySector]
    warnings: list[str]
    settings: dict = field(default_factory=dict)
    incoherent: "IncoherentBounds | None" = None

    @property
    def delta_mu_half_target(self) -> float:
        return self.delta_mu_half[self.target_sector]

    def coherent_totals(self) -> dict[str, float]:
        return {
            "delta": self.delta_half,
            "delta_s": self.delta_s_half,
            "delta_mu": self.delta_mu_half_target,
        }


@dataclass
class IncoherentBounds:
    one_body: dict[str, float]
    two_body: dict[str, float]
    total: dict[str, float]
    df_two_body_upper: dict[str, float]
    df_truncation_tol: float
    two_body_method: str
    unconverged: list[SymmetrySector] = field(default_factory=list)


def _scan_one_sector(
    ham: SpinFreeHamiltonian,
    sector: SymmetrySector,
    method: str,
    settings: OptimizerSettings,
    dense_cap: int,
    dim_cap: int,
) -> SectorEntry:
    if method == "hf":
        lo = minimize_sector(ham, sector, settings)
        hi = maximize_sector(ham, sector, settings)
        return SectorEntry(
            e_min=lo.energy,
            e_max=hi.energy,
            method="hf",
            converged=lo.converged and hi.converged,
            detail={
                "grad_norm_min": lo.grad_norm,
                "grad_norm_max": hi.grad_norm,
                "iterations": lo.iterations + hi.iterations,
            },
            rotations={"min": lo.rotation.params, "max": hi.rotation.params},
        )
    if method == "fci":
        res = extremal_eigenvalues(ham, sector, dense_cap=dense_cap, dim_cap=dim_cap)
        return SectorEntry(
            e_min=res.e_min,
            e_max=res.e_max,
            method="fci",
            converged=res.converged,
            detail={"dim": res.dim, "residuals": res.residuals, "solver": res.method},
        )
    if method == "exact1body":
        e_min, e_max = one_body_sector_extremes(ham, sector)
        return SectorEntry(e_min=e_min, e_max=e_max, method="exact1body")
    raise BoundsError(f"unknown scan method {method!r}")


_POOL_STATE: dict = {}


def _pool_init(ham, method, settings, dense_cap, dim_cap):
    _POOL_STATE.update(
        ham=ham, method=method, settings=settings, dense_cap=dense_cap, dim_cap=dim_cap
    )


def _pool_task(sector: SymmetrySector):
    s = _POOL_STATE
    try:
        entry = _scan_one_sector(
            s["ham"], sector, s["method"], s["settings"], s["dense_cap"], s["dim_cap"]
        )
        return sector, entry, None
    except DimensionCapError as exc:
        return sector, None, str(exc)


def scan_sectors(
    ham: SpinFreeHamiltonian,
    method: str,
    settings: OptimizerSettings | None = None,
    sector_filter: list[SymmetrySector] | None = None,
    grid: str = "canonical",
    jobs: int = 1,
    dense_cap: int = DEFAULT_DENSE_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
) -> SectorSpectrumTable:
    """Extremal energies for every requested sector.

    Without a filter the scan covers all canonical sectors (the full grid in
    ``grid='full'`` mode).  FCI scans refuse sectors above the dimension cap,
    naming the offender.
    """
    if method not in SCAN_METHODS:
        raise BoundsError(f"method must be one of {SCAN_METHODS}, got {method!r}")
    if method == "exact1body" and not ham.is_one_body():
        raise BoundsError("exact1body scans require a vanishing two-electron tensor")
    settings = settings or OptimizerSettings()

    if sector_filter is not None:
        sectors = [s.validate(ham.n_orb) for s in sector_filter]
    elif grid == "full":
        sectors = all_sectors(ham.n_orb)
    elif grid == "canonical":
        sectors = canonical_sectors(ham.n_orb)
    else:
        raise BoundsError(f"unknown grid {grid!r}")

    if method == "fci":
        # fail fast before any work if a sector is over the cap
        from math import comb

        for s in sectors:
            dim = comb(ham.n_orb, s.n_alpha) * comb(ham.n_orb, s.n_beta)
            if dim > dim_cap:
                raise DimensionCapError(
                    f"sector ({s.n_alpha},{s.n_beta}) has dimension {dim} "
                    f"exceeding the cap {dim_cap}"
                )

    entries: dict[SymmetrySector, SectorEntry] = {}
    if jobs > 1 and len(sectors) > 1:
        with multiprocessing.Pool(
            processes=jobs,
            initializer=_pool_init,
            initargs=(ham, method, settings, dense_cap, dim_cap),
        ) as pool:
            for sector, entry, err in pool.map(_pool_task, sectors):
                if err is not None:
                    raise DimensionCapError(err)
                entries[sector] = entry
    else:
        for sector in sectors:
            entries[sector] = _scan_one_sector(
                ham, sector, method, settings, dense_cap, dim_cap
            )

    return SectorSpectrumTable(
        n_orb=ham.n_orb,
        method=method,
        grid="filter" if sector_filter is not None else grid,
        hamiltonian_id=ham.checksum(),
        entries=entries,
        settings=asdict(settings) if method == "hf" else {},
    )


def _check_canonical_coverage(table: SectorSpectrumTable) -> list[SymmetrySector]:
    missing = [
        s for s in canonical_sectors(table.n_orb) if table.lookup(s) is None
    ]
    return missing


def assemble_bounds(
    table: SectorSpectrumTable, target_sector: SymmetrySector
) -> BoundsReport:
    """Derive the three bound tiers from a sector table.

    Requires full canonical coverage; argmax ties within 1e-10 resolve
    toward the lexicographically smaller sector.
    """
    missing = _check_canonical_coverage(table)
    if missing:
        raise BoundsError(
            "table missing sectors: " + ", ".join(s.label() for s in missing)
        )
    if table.lookup(target_sector) is None:
        raise BoundsError(f"target sector {target_sector.label()} not in table")

    ordered = sorted(table.entries.items())
    e_max_best: tuple[float, SymmetrySector] | None = None
    e_min_best: tuple[float, SymmetrySector] | None = None
    range_best: tuple[float, SymmetrySector] | None = None
    mu_map: dict[SymmetrySector, float] = {}
    for sector, entry in ordered:
        mu_map[sector] = 0.5 * (entry.e_max - entry.e_min)
        if e_max_best is None or entry.e_max > e_max_best[0] + TIE_TOL:
            e_max_best = (entry.e_max, sector)
        if e_min_best is None or entry.e_min < e_min_best[0] - TIE_TOL:
            e_min_best = (entry.e_min, sector)
        rng = entry.e_max - entry.e_min
        if range_best is None or rng > range_best[0] + TIE_TOL:
            range_best = (rng, sector)

    if target_sector not in mu_map:
        target_sector = target_sector.mirror()

    warnings = []
    unconverged = table.unconverged_sectors()
    if unconverged:
        warnings.append(
            "unconverged sectors: " + ", ".join(s.label() for s in unconverged)
        )

    report = BoundsReport(
        hamiltonian_id=table.hamiltonian_id,
        method=table.method,
        target_sector=target_sector,
        delta_half=0.5 * (e_max_best[0] - e_min_best[0]),
        delta_s_half=0.5 * range_best[0],
        delta_mu_half=mu_map,
        argmax={
            "delta_max_sector": e_max_best[1],
            "delta_min_sector": e_min_best[1],
            "delta_s_sector": range_best[1],
        },
        unconverged=unconverged,
        warnings=warnings,
        settings=dict(table.settings),
    )
    check_hierarchy(report)
    return report


def check_hierarchy(report: BoundsReport, tol: float = TIE_TOL) -> None:
    """Corollary hierarchy: every sector half-range <= delta_s/2 <= delta/2."""
    if report.delta_s_half > report.delta_half + tol:
        raise InvariantViolation(
            f"delta_s/2 = {report.delta_s_half!r} exceeds delta/2 = {report.delta_half!r}"
        )
    for sector, value in report.delta_mu_half.items():
        if value > report.delta_s_half + tol:
            raise InvariantViolation(
                f"delta_mu/2 in sector {sector.label()} = {value!r} exceeds "
                f"delta_s/2 = {report.delta_s_half!r}"
            )


def _tiers_from_table(table: SectorSpectrumTable, target: SymmetrySector) -> dict[str, float]:
    report = assemble_bounds(table, target)
    return report.coherent_totals()


def _widen_with_candidates(
    two_body: SpinFreeHamiltonian,
    table: SectorSpectrumTable,
    candidates: SectorSpectrumTable,
) -> SectorSpectrumTable:
    """Fold candidate determinants into a two-body component scan.

    Evaluating the coherent scan's extremal rotations on the two-body
    component costs no optimization and makes the Weyl comparison
    structural: a determinant's one-body expectation always lies inside
    the exact one-body range, so a range that covers the same determinant's
    two-body expectations cannot undershoot the coherent difference.
    """
    from .hf_optimizer import hf_energy
    from .orbital_rotation import OrbitalRotation

    widened = {}
    for sector, entry in table.entries.items():
        cand = candidates.lookup(sector)
        if cand is None or not cand.rotations:
            widened[sector] = entry
            continue
        values = [
            hf_energy(
                two_body,
                OrbitalRotation.from_params(params, two_body.n_orb),
                sector,
            )
            for params in cand.rotations.values()
        ]
        widened[sector] = SectorEntry(
            e_min=min([entry.e_min] + values),
            e_max=max([entry.e_max] + values),
            method=entry.method,
            converged=entry.converged,
            detail=entry.detail,
            rotations=entry.rotations,
        )
    return SectorSpectrumTable(
        n_orb=table.n_orb,
        method=table.method,
        grid=table.grid,
        hamiltonian_id=table.hamiltonian_id,
        entries=widened,
        settings=table.settings,
    )


def incoherent_bounds(
    ham: SpinFreeHamiltonian,
    method: str,
    settings: OptimizerSettings | None = None,
    target_sector: SymmetrySector | None = None,
    jobs: int = 1,
    df_tol: float = 1e-10,
    dense_cap: int = DEFAULT_DENSE_CAP,
    dim_cap: int = DEFAULT_DIM_CAP,
    candidates: SectorSpectrumTable | None = None,
) -> IncoherentBounds:
    """Per-tier (one-body, two-body, total) bounds from the Majorana split.

    The one-body tier is exact (closed-form fillings of kappa); the two-body
    tier scans the re-expanded two-body component with the given method.
    Passing the coherent scan as ``candidates`` widens the two-body ranges by
    the candidate determinants' expectations (relevant for the hf method
    only, see _widen_with_candidates).  The double-factorization upper bound
    on the two-body sector tier is attached for context.
    """
    if target_sector is None:
        raise BoundsError("incoherent bounds need a target sector")
    target_sector.validate(ham.n_orb)
    split = majorana_split(ham)

    one_table = scan_sectors(split.one_body, "exact1body", jobs=1)
    one = _tiers_from_table(one_table, target_sector)
    one["delta_mu"] = one_body_sector_gap(split.kappa, target_sector)

    two_table = scan_sectors(
        split.two_body, method, settings=settings, jobs=jobs,
        dense_cap=dense_cap, dim_cap=dim_cap,
    )
    if candidates is not None and method == "hf":
        two_table = _widen_with_candidates(split.two_body, two_table, candidates)
    two = _tiers_from_table(two_table, target_sector)

    df = double_factorize(ham.g, tol=df_tol)
    df_mu = two_body_df_sector_bound(df, target_sector)
    df_s = max(
        two_body_df_sector_bound(df, s) for s in canonical_sectors(ham.n_orb)
    )

    return IncoherentBounds(
        one_body=one,
        two_body=two,
        total={k: one[k] + two[k] for k in ("delta", "delta_s", "delta_mu")},
        df_two_body_upper={"delta_mu": df_mu, "delta_s": df_s},
        df_truncation_tol=df_tol,
        two_body_method=method,
        unconverged=two_table.unconverged_sectors(),
    )


def check_weyl(
    report: BoundsReport, incoherent: IncoherentBounds, tol: float = 1e-9
) -> list[str]:
    """Coherent <= incoherent per tier; returns violation messages."""
    violations = []
    coherent = report.coherent_totals()
    for tier in ("delta", "delta_s", "delta_mu"):
        if coherent[tier] > incoherent.total[tier] + tol:
            violations.append(
                f"coherent {tier}/2 = {coherent[tier]!r} exceeds incoherent "
                f"total {incoherent.total[tier]!r}"
            )
    return violations


def table_to_dict(table: SectorSpectrumTable) -> dict:
    return {
        "schema": "specbound.sector_table/1",
        "n_orb": table.n_orb,
        "method": table.method,
        "grid": table.grid,
        "hamiltonian_id": table.hamiltonian_id,
        "settings": dict(table.settings),
        "sector_count_canonical": sector_count(table.n_orb),
        "entries": {
            sector.label(): {
                "e_min": entry.e_min,
                "e_max": entry.e_max,
                "half_range": 0.5 * (entry.e_max - entry.e_min),
                "method": entry.method,
                "converged": entry.converged,
                **entry.detail,
            }
            for sector, entry in sorted(table.entries.items())
        },
    }


def report_to_dict(report: BoundsReport) -> dict:
    doc = {
        "schema": "specbound.bounds_report/1",
        "hamiltonian_id": report.hamiltonian_id,
        "method": report.method,
        "settings": dict(report.settings),
        "target_sector": report.target_sector.label(),
        "delta_half": report.delta_half,
        "delta_s_half": report.delta_s_half,
        "delta_mu_half_target": report.delta_mu_half_target,
        "delta_mu_half": {
            s.label(): v for s, v in sorted(report.delta_mu_half.items())
        },
        "argmax": {k: s.label() for k, s in report.argmax.items()},
        "unconverged_sectors": [s.label() for s in report.unconverged],
        "warnings": list(report.warnings),
    }
    if report.incoherent is not None:
        inc = report.incoherent
        doc["incoherent"] = {
            "one_body": dict(inc.one_body),
            "two_body": dict(inc.two_body),
            "total": dict(inc.total),
            "df_two_body_upper": dict(inc.df_two_body_upper),
            "df_truncation_tol": inc.df_truncation_tol,
            "two_body_method": inc.two_body_method,
            "unconverged_sectors": [s.label() for s in inc.unconverged],
        }
    return doc


def report_csv(report: BoundsReport) -> str:
    """Table-1 style CSV: one row per tier, 1-body/2-body/incoherent/coherent."""
    inc = report.incoherent
    lines = ["bound,one_body,two_body,total_incoherent,total_coherent"]
    coherent = report.coherent_totals()
    for tier, label in (("delta", "delta/2"), ("delta_s", "delta_s/2"), ("delta_mu", "delta_mu/2")):
        if inc is not None:
            lines.append(
                f"{label},{inc.one_body[tier]:.12g},{inc.two_body[tier]:.12g},"
                f"{inc.total[tier]:.12g},{coherent[tier]:.12g}"
            )
        else:
            lines.append(f"{label},,,,{coherent[tier]:.12g}")
    return "\n".join(lines) + "\n"
