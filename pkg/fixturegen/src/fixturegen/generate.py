"""Fixture generation and verification.

``generate`` computes integrals for a system, runs the backend RHF, writes
an FCIDUMP in the canonical-MO basis plus an AO-JSON bundle (with the
overlap matrix for the orthogonalization path), and records a manifest with
geometry, basis, checksums and backend reference energies.  FCI references
come from the independent Fock-space diagonalizer and are limited to small
orbital counts.

``manifest_check`` re-validates a fixture directory: checksums, and --
through the consumer's command-line interface only -- that the files parse
and that the reference energies are reproduced.
"""

from __future__ import annotations

import hashlib
import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .fcidump_io import write_ao_json, write_fcidump
from .molecule import Molecule, compute_integrals
from .reference_fci import sector_ground_energy
from .scf import mo_integrals, restricted_hartree_fock

FCI_REFERENCE_MAX_ORBITALS = 7
BACKEND = {"name": "fixturegen-mcmurchie-davidson", "version": __version__}


@dataclass(frozen=True)
class FixtureSpec:
    name: str
    molecule: Molecule
    formats: tuple[str, ...] = ("fcidump", "ao-json")
    references: tuple[str, ...] = ("rhf", "fci")

    def __post_init__(self):
        for fmt in self.formats:
            if fmt not in ("fcidump", "ao-json"):
                raise ValueError(f"unknown output format {fmt!r}")
        for ref in self.references:
            if ref not in ("rhf", "fci"):
                raise ValueError(f"unknown reference method {ref!r}")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def generate(spec: FixtureSpec, out_dir: str | Path) -> dict:
    """Emit fixture files plus manifest; returns the manifest document."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mol = spec.molecule
    ints = compute_integrals(mol)
    n_elec = mol.n_electrons
    scf = restricted_hartree_fock(ints, n_elec)
    # canonical-MO integrals: orthonormal basis, required by the FCI reference
    h_mo, g_mo = mo_integrals(ints, scf.mo_coeff)

    files: dict[str, dict] = {}
    if "fcidump" in spec.formats:
        path = out / f"{spec.name}.fcidump"
        write_fcidump(path, ints.e_nuc, h_mo, g_mo, nelec=n_elec, ms2=0)
        files["fcidump"] = {"path": path.name, "sha256": _sha256(path)}
    if "ao-json" in spec.formats:
        path = out / f"{spec.name}.ao.json"
        meta = {
            "system": spec.name,
            "basis": mol.basis,
            "geometry_angstrom": [[e, list(xyz)] for e, xyz in mol.atoms],
            **mol.meta,
        }
        write_ao_json(path, ints.e_nuc, ints.S, ints.h, ints.g, meta=meta)
        files["ao-json"] = {"path": path.name, "sha256": _sha256(path)}

    references: dict = {}
    if "rhf" in spec.references:
        references["rhf_energy"] = scf.energy
        references["rhf_iterations"] = scf.iterations
    if "fci" in spec.references and ints.n_ao <= FCI_REFERENCE_MAX_ORBITALS:
        n_alpha = n_elec // 2 + n_elec % 2
        n_beta = n_elec // 2
        energy = sector_ground_energy(ints.e_nuc, h_mo, g_mo, n_alpha, n_beta)
        references["fci"] = {
            "sector": f"{n_alpha},{n_beta}",
            "ground_energy": energy,
        }

    manifest = {
        "schema": "fixturegen.manifest/1",
        "name": spec.name,
        "basis": mol.basis,
        "geometry_angstrom": [[e, list(xyz)] for e, xyz in mol.atoms],
        "meta": dict(mol.meta),
        "n_orb": ints.n_ao,
        "n_elec": n_elec,
        "e_nuc": ints.e_nuc,
        "backend": dict(BACKEND),
        "references": references,
        "files": files,
    }
    (out / f"{spec.name}.manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


@dataclass
class CheckReport:
    name: str
    passed: bool
    failures: list[str] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)


def _consumer_fci_ground(
    fcidump_path: Path, sector: str, consumer_cli: str, workdir: Path
) -> float:
    """Ground energy for one sector through the consumer CLI."""
    out_dir = workdir / "check-out"
    cmd = [
        consumer_cli, "scan",
        "--fcidump", str(fcidump_path),
        "--method", "fci",
        "--sectors", sector,
        "--out", str(out_dir),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"consumer scan failed ({proc.returncode}): {proc.stderr.strip()}"
        )
    doc = json.loads((out_dir / f"{fcidump_path.stem}.scan.json").read_text())
    return float(doc["table"]["entries"][sector]["e_min"])


def manifest_check(
    fixture_dir: str | Path,
    name: str,
    consumer_cli: str = "specbound",
    fci_tol: float = 1e-8,
) -> CheckReport:
    """Checksums plus consumer-side parse and reference-energy verification."""
    directory = Path(fixture_dir)
    manifest_path = directory / f"{name}.manifest.json"
    report = CheckReport(name=name, passed=True)
    if not manifest_path.exists():
        return CheckReport(name=name, passed=False, failures=["manifest missing"])
    manifest = json.loads(manifest_path.read_text())

    for fmt, entry in manifest["files"].items():
        path = directory / entry["path"]
        if not path.exists():
            report.failures.append(f"{fmt}: file missing")
            continue
        digest = _sha256(path)
        if digest != entry["sha256"]:
            report.failures.append(
                f"{fmt}: checksum mismatch ({digest[:12]} != {entry['sha256'][:12]})"
            )
        else:
            report.checked.append(f"{fmt}: checksum")

    fci_ref = manifest["references"].get("fci")
    fcidump_entry = manifest["files"].get("fcidump")
    if fci_ref and fcidump_entry and not report.failures:
        try:
            energy = _consumer_fci_ground(
                directory / fcidump_entry["path"],
                fci_ref["sector"],
                consumer_cli,
                directory,
            )
            if abs(energy - fci_ref["ground_energy"]) > fci_tol:
                report.failures.append(
                    f"fci reference mismatch: consumer {energy!r} vs "
                    f"manifest {fci_ref['ground_energy']!r}"
                )
            else:
                report.checked.append("fci reference vs consumer oracle")
        except RuntimeError as exc:
            report.failures.append(str(exc))

    report.passed = not report.failures
    return report
