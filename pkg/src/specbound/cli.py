"""Batch command-line interface.

Commands wire ingestion, sector scans, bound assembly and scaling fits into
reproducible runs: every output embeds the validated configuration, input
checksums and the package version, and all numerics are serialized with 12
significant digits.  Exit codes: 0 success, 2 completed with unconverged
entries, 1 error.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time
from pathlib import Path

import click

from . import __version__
from .aojson import parse_ao_bundle, lowdin_orthogonalize
from .bounds import (
    BoundsError,
    InvariantViolation,
    assemble_bounds,
    check_weyl,
    incoherent_bounds,
    report_csv,
    report_to_dict,
    scan_sectors,
    table_to_dict,
)
from .fci import DimensionCapError
from .fcidump import parse_fcidump, suggested_sector
from .hf_optimizer import OptimizerSettings
from .scaling import ScalingError, build_series, emit_plotdata, fit_power_law
from .sectors import SectorError, SymmetrySector, canonical_sectors

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCONVERGED = 2


class CliError(click.ClickException):
    exit_code = EXIT_ERROR


def _round12(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}") + 0.0  # normalizes -0.0
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _dump_json(doc: dict, path: Path) -> None:
    path.write_text(
        json.dumps(_round12(doc), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_hamiltonian(fcidump: str | None, ao_json: str | None):
    if (fcidump is None) == (ao_json is None):
        raise CliError("exactly one of --fcidump or --ao-json is required")
    raw = Path(fcidump or ao_json)
    if not raw.exists():
        raise CliError(f"input file not found: {raw}")
    if fcidump is not None:
        ham = parse_fcidump(raw)
        fmt = "fcidump"
    else:
        ham = lowdin_orthogonalize(parse_ao_bundle(raw))
        fmt = "ao-json"
    info = {"path": str(raw), "format": fmt, "sha256": _sha256(raw)}
    return ham, info


def _default_sector(ham) -> SymmetrySector:
    suggested = suggested_sector(ham)
    if suggested is not None:
        return suggested.canonical()
    n = ham.n_orb
    return SymmetrySector((n + 1) // 2, n // 2)


def _parse_sector(text: str | None, ham) -> SymmetrySector:
    if text is None:
        return _default_sector(ham)
    try:
        return SymmetrySector.from_label(text).validate(ham.n_orb)
    except SectorError as exc:
        raise CliError(str(exc))


def _settings_from_options(restarts, seed, grad_tol, max_iter) -> OptimizerSettings:
    try:
        return OptimizerSettings(
            grad_tol=grad_tol, max_iter=max_iter, restarts=restarts, seed=seed
        )
    except ValueError as exc:
        raise CliError(str(exc))


def _jobs_default() -> int:
    env = os.environ.get("SPECBOUND_JOBS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _base_document(config: dict, input_info: dict) -> dict:
    return {
        "version": __version__,
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "config": config,
        "input": input_info,
    }


_common_options = [
    click.option("--fcidump", type=str, default=None, help="FCIDUMP input path."),
    click.option("--ao-json", type=str, default=None, help="AO-JSON input path (Loewdin path)."),
    click.option("--method", type=click.Choice(["hf", "fci"]), default="hf", show_default=True),
    click.option("--restarts", type=int, default=4, show_default=True),
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--grad-tol", type=float, default=1e-7, show_default=True),
    click.option("--max-iter", type=int, default=2000, show_default=True),
    click.option("--out", type=str, default=".", show_default=True, help="Output directory."),
    click.option("--jobs", type=int, default=None, help="Worker count (default $SPECBOUND_JOBS or 1)."),
    click.option("--fci-cap", type=int, default=2_000_000, show_default=True),
]


def _with_common(f):
    for opt in reversed(_common_options):
        f = opt(f)
    return f


@click.group()
@click.version_option(version=__version__, prog_name="specbound")
def main():
    """Symmetry-aware spectral bounds for electronic-structure Hamiltonians."""


@main.command("bounds")
@_with_common
@click.option("--sector", type=str, default=None, help="Target sector 'a,b' (default from header or half filling).")
@click.option("--incoherent/--no-incoherent", "with_incoherent", default=True, show_default=True)
def cmd_bounds(fcidump, ao_json, method, restarts, seed, grad_tol, max_iter, out,
               jobs, fci_cap, sector, with_incoherent):
    """Compute the bound hierarchy report (JSON + Table-1 style CSV)."""
    jobs = jobs if jobs is not None else _jobs_default()
    config = {
        "command": "bounds", "fcidump": fcidump, "ao_json": ao_json,
        "method": method, "sector": sector, "restarts": restarts, "seed": seed,
        "grad_tol": grad_tol, "max_iter": max_iter, "out": out, "jobs": jobs,
        "fci_cap": fci_cap, "incoherent": with_incoherent,
    }
    ham, info = _load_hamiltonian(fcidump, ao_json)
    target = _parse_sector(sector, ham)
    settings = _settings_from_options(restarts, seed, grad_tol, max_iter)

    try:
        table = scan_sectors(ham, method, settings=settings, jobs=jobs, dim_cap=fci_cap)
        report = assemble_bounds(table, target)
        if with_incoherent:
            report.incoherent = incoherent_bounds(
                ham, method, settings=settings, target_sector=target,
                jobs=jobs, dim_cap=fci_cap, candidates=table,
            )
            violations = check_weyl(report, report.incoherent)
            if violations:
                raise CliError("Weyl invariant violated: " + "; ".join(violations))
    except (DimensionCapError, BoundsError, InvariantViolation) as exc:
        raise CliError(str(exc))

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(info["path"]).stem
    doc = _base_document(config, info)
    doc["report"] = report_to_dict(report)
    _dump_json(doc, out_dir / f"{stem}.bounds.json")
    (out_dir / f"{stem}.bounds.csv").write_text(report_csv(report), encoding="utf-8")

    click.echo(f"delta/2      = {report.delta_half:.6f} Ha")
    click.echo(f"delta_s/2    = {report.delta_s_half:.6f} Ha")
    click.echo(
        f"delta_mu/2   = {report.delta_mu_half_target:.6f} Ha "
        f"(sector {report.target_sector.label()})"
    )
    if report.unconverged:
        click.echo(
            "warning: unconverged sectors "
            + ", ".join(s.label() for s in report.unconverged),
            err=True,
        )
        sys.exit(EXIT_UNCONVERGED)


@main.command("scan")
@_with_common
@click.option("--sectors", "sectors_opt", type=str, default="canonical", show_default=True,
              help="'all', 'canonical', or sector list like '2,2' or '1,1;2,0'.")
def cmd_scan(fcidump, ao_json, method, restarts, seed, grad_tol, max_iter, out,
             jobs, fci_cap, sectors_opt):
    """Scan sector extremal energies into a table file."""
    jobs = jobs if jobs is not None else _jobs_default()
    config = {
        "command": "scan", "fcidump": fcidump, "ao_json": ao_json, "method": method,
        "sectors": sectors_opt, "restarts": restarts, "seed": seed,
        "grad_tol": grad_tol, "max_iter": max_iter, "out": out, "jobs": jobs,
        "fci_cap": fci_cap,
    }
    ham, info = _load_hamiltonian(fcidump, ao_json)
    settings = _settings_from_options(restarts, seed, grad_tol, max_iter)

    sector_filter = None
    grid = "canonical"
    if sectors_opt == "all":
        grid = "full"
    elif sectors_opt == "canonical":
        grid = "canonical"
    else:
        try:
            sector_filter = [
                SymmetrySector.from_label(tok).validate(ham.n_orb)
                for tok in sectors_opt.replace(";", " ").split()
            ]
        except SectorError as exc:
            raise CliError(str(exc))
        if not sector_filter:
            raise CliError(f"no sectors parsed from {sectors_opt!r}")

    try:
        table = scan_sectors(
            ham, method, settings=settings, sector_filter=sector_filter,
            grid=grid, jobs=jobs, dim_cap=fci_cap,
        )
    except (DimensionCapError, BoundsError) as exc:
        raise CliError(str(exc))

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(info["path"]).stem
    doc = _base_document(config, info)
    doc["table"] = table_to_dict(table)
    _dump_json(doc, out_dir / f"{stem}.scan.json")

    click.echo(f"scanned {len(table.entries)} sectors with method {method}")
    unconverged = table.unconverged_sectors()
    if unconverged:
        click.echo(
            "warning: unconverged sectors "
            + ", ".join(s.label() for s in unconverged),
            err=True,
        )
        sys.exit(EXIT_UNCONVERGED)


@main.command("validate")
@_with_common
@click.option("--tolerance", type=float, default=1e-9, show_default=True,
              help="Allowed variational-ordering violation in Hartree.")
def cmd_validate(fcidump, ao_json, method, restarts, seed, grad_tol, max_iter, out,
                 jobs, fci_cap, tolerance):
    """Per-sector HF vs FCI comparison; fails on variational-order violations."""
    jobs = jobs if jobs is not None else _jobs_default()
    config = {
        "command": "validate", "fcidump": fcidump, "ao_json": ao_json,
        "restarts": restarts, "seed": seed, "grad_tol": grad_tol,
        "max_iter": max_iter, "out": out, "jobs": jobs, "fci_cap": fci_cap,
        "tolerance": tolerance,
    }
    ham, info = _load_hamiltonian(fcidump, ao_json)
    settings = _settings_from_options(restarts, seed, grad_tol, max_iter)

    try:
        hf_table = scan_sectors(ham, "hf", settings=settings, jobs=jobs)
        fci_table = scan_sectors(ham, "fci", jobs=jobs, dim_cap=fci_cap)
    except (DimensionCapError, BoundsError) as exc:
        raise CliError(str(exc))

    rows = []
    violations = []
    for sector in canonical_sectors(ham.n_orb):
        hf = hf_table.entries[sector]
        fci = fci_table.entries[sector]
        hf_range = hf.e_max - hf.e_min
        fci_range = fci.e_max - fci.e_min
        rows.append({
            "sector": sector.label(),
            "hf_e_min": hf.e_min, "fci_e_min": fci.e_min,
            "hf_e_max": hf.e_max, "fci_e_max": fci.e_max,
            "abs_error_min": hf.e_min - fci.e_min,
            "abs_error_max": fci.e_max - hf.e_max,
            "half_range_hf": 0.5 * hf_range,
            "half_range_fci": 0.5 * fci_range,
            "half_range_abs_error": 0.5 * (fci_range - hf_range),
            "half_range_pct_error": (
                100.0 * (fci_range - hf_range) / fci_range if fci_range > 0 else 0.0
            ),
            "hf_converged": hf.converged,
        })
        if hf.e_min < fci.e_min - tolerance:
            violations.append(f"sector {sector.label()}: HF e_min below FCI e_min")
        if hf.e_max > fci.e_max + tolerance:
            violations.append(f"sector {sector.label()}: HF e_max above FCI e_max")

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(info["path"]).stem
    doc = _base_document(config, info)
    doc["rows"] = rows
    doc["violations"] = violations
    _dump_json(doc, out_dir / f"{stem}.validate.json")

    click.echo(f"{'sector':>8} {'hf_min':>14} {'fci_min':>14} {'hf_max':>14} {'fci_max':>14} {'pct_err':>8}")
    for r in rows:
        click.echo(
            f"{r['sector']:>8} {r['hf_e_min']:14.6f} {r['fci_e_min']:14.6f} "
            f"{r['hf_e_max']:14.6f} {r['fci_e_max']:14.6f} {r['half_range_pct_error']:8.3f}"
        )
    if violations:
        for v in violations:
            click.echo("violation: " + v, err=True)
        sys.exit(EXIT_ERROR)
    unconverged = hf_table.unconverged_sectors()
    if unconverged:
        click.echo(
            "warning: unconverged sectors "
            + ", ".join(s.label() for s in unconverged),
            err=True,
        )
        sys.exit(EXIT_UNCONVERGED)


@main.command("scaling")
@click.option("--manifest", type=str, required=True,
              help="JSON manifest: {method, series, entries: [{path, format, x, label, sector}]}")
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--restarts", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grad-tol", type=float, default=1e-7, show_default=True)
@click.option("--max-iter", type=int, default=2000, show_default=True)
@click.option("--jobs", type=int, default=None)
@click.option("--fci-cap", type=int, default=2_000_000, show_default=True)
def cmd_scaling(manifest, out, restarts, seed, grad_tol, max_iter, jobs, fci_cap):
    """Run bounds over a fixture manifest, fit power laws, emit plot data."""
    jobs = jobs if jobs is not None else _jobs_default()
    manifest_path = Path(manifest)
    if not manifest_path.exists():
        raise CliError(f"manifest not found: {manifest_path}")
    try:
        spec = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid manifest JSON: {exc}")
    method = spec.get("method", "hf")
    if method not in ("hf", "fci"):
        raise CliError(f"manifest method must be hf or fci, got {method!r}")
    series_name = spec.get("series", manifest_path.stem)
    entries = spec.get("entries", [])
    if not entries:
        raise CliError("manifest has no entries")
    settings = _settings_from_options(restarts, seed, grad_tol, max_iter)
    config = {
        "command": "scaling", "manifest": str(manifest_path), "method": method,
        "restarts": restarts, "seed": seed, "grad_tol": grad_tol,
        "max_iter": max_iter, "out": out, "jobs": jobs, "fci_cap": fci_cap,
    }

    reports, xs, labels = [], [], []
    failures, excluded = [], []
    for entry in entries:
        label = entry.get("label", entry.get("path", "?"))
        try:
            fmt = entry.get("format", "fcidump")
            ham, _ = _load_hamiltonian(
                entry["path"] if fmt == "fcidump" else None,
                entry["path"] if fmt == "ao-json" else None,
            )
            target = _parse_sector(entry.get("sector"), ham)
            table = scan_sectors(ham, method, settings=settings, jobs=jobs, dim_cap=fci_cap)
            report = assemble_bounds(table, target)
        except (CliError, BoundsError, DimensionCapError, KeyError, OSError, ValueError) as exc:
            failures.append(f"{label}: {exc}")
            continue
        if report.unconverged:
            excluded.append(f"{label}: unconverged sectors present")
            continue
        reports.append(report)
        xs.append(float(entry["x"]))
        labels.append(label)

    if len(reports) < 1:
        raise CliError("no usable fixtures in manifest; " + "; ".join(failures))

    try:
        series = build_series(reports, xs, labels)
        fits = {}
        for tier, pts in series.items():
            if len(pts) >= 2 and all(p.y > 0 for p in pts):
                fits[tier] = fit_power_law(pts)
    except ScalingError as exc:
        raise CliError(str(exc))

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = emit_plotdata(series, fits)
    doc = _base_document(config, {"manifest": str(manifest_path), "sha256": _sha256(manifest_path)})
    doc["scaling"] = payload["json"]
    doc["failures"] = failures
    doc["excluded_unconverged"] = excluded
    _dump_json(doc, out_dir / f"{series_name}.scaling.json")
    (out_dir / f"{series_name}.scaling.csv").write_text(payload["csv"], encoding="utf-8")
    for tier, pts in series.items():
        lines = ["x,y,label"]
        lines += [f"{p.x:.12g},{p.y:.12g},{p.label}" for p in pts]
        if tier in fits:
            f = fits[tier]
            lines.append(f"# fit exponent={f.exponent:.12g} prefactor={f.prefactor:.12g} r2={f.r_squared:.12g}")
        (out_dir / f"{series_name}_{tier}.csv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8"
        )

    for tier, f in fits.items():
        click.echo(f"{tier}: exponent {f.exponent:.4f}, prefactor {f.prefactor:.4f}, r2 {f.r_squared:.4f}")
    if failures or excluded:
        for msg in failures + excluded:
            click.echo("excluded: " + msg, err=True)
        sys.exit(EXIT_UNCONVERGED)


if __name__ == "__main__":
    main()
