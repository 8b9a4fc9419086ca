import json
import re

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import random_hamiltonian
from specbound.cli import main
from specbound.fcidump import write_fcidump
from specbound.sectors import sector_count


@pytest.fixture
def tiny_fcidump(tmp_path, rng):
    ham = random_hamiltonian(rng, 3, g_scale=0.3)
    ham = ham.shifted(-float(ham.e_const))
    path = tmp_path / "tiny.fcidump"
    write_fcidump(ham, path, nelec=3, ms2=1)
    return path


def run(args, **kwargs):
    return CliRunner().invoke(main, args, **kwargs)


def strip_timestamp(text: str) -> str:
    return re.sub(r'"generated_at": "[^"]*"', '"generated_at": ""', text)


def test_bounds_fci_happy_path(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    result = run([
        "bounds", "--fcidump", str(tiny_fcidump), "--method", "fci",
        "--sector", "2,1", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "tiny.bounds.json").read_text())
    rep = doc["report"]
    assert rep["delta_mu_half_target"] <= rep["delta_s_half"] + 1e-10
    assert rep["delta_s_half"] <= rep["delta_half"] + 1e-10
    assert doc["config"]["command"] == "bounds"
    assert doc["input"]["sha256"]
    assert "incoherent" in rep
    csv_text = (out / "tiny.bounds.csv").read_text()
    assert csv_text.startswith("bound,one_body,two_body")


def test_bounds_missing_file_exit_1(tmp_path):
    result = run(["bounds", "--fcidump", str(tmp_path / "nope.fcidump")])
    assert result.exit_code == 1
    assert "nope.fcidump" in result.stderr


def test_bounds_requires_exactly_one_input(tiny_fcidump):
    result = run(["bounds"])
    assert result.exit_code == 1
    result = run([
        "bounds", "--fcidump", str(tiny_fcidump), "--ao-json", str(tiny_fcidump),
    ])
    assert result.exit_code == 1


def test_bounds_unconverged_exit_2(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    result = run([
        "bounds", "--fcidump", str(tiny_fcidump), "--method", "hf",
        "--max-iter", "1", "--restarts", "0", "--grad-tol", "1e-12",
        "--out", str(out), "--no-incoherent",
    ])
    assert result.exit_code == 2, result.output
    assert "unconverged" in result.stderr


def test_bounds_determinism_modulo_timestamp(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    args = [
        "bounds", "--fcidump", str(tiny_fcidump), "--method", "hf",
        "--seed", "7", "--restarts", "2", "--out", str(out),
    ]
    assert run(args).exit_code == 0
    a = strip_timestamp((out / "tiny.bounds.json").read_text())
    assert run(args).exit_code == 0
    b = strip_timestamp((out / "tiny.bounds.json").read_text())
    assert a == b


def test_scan_canonical_count(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    result = run([
        "scan", "--fcidump", str(tiny_fcidump), "--method", "hf",
        "--sectors", "canonical", "--restarts", "1", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "tiny.scan.json").read_text())
    assert len(doc["table"]["entries"]) == sector_count(3)


def test_scan_single_vacuum_sector(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    result = run([
        "scan", "--fcidump", str(tiny_fcidump), "--method", "fci",
        "--sectors", "0,0", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "tiny.scan.json").read_text())
    entry = doc["table"]["entries"]["0,0"]
    assert entry["e_min"] == entry["e_max"] == 0.0


def test_scan_fci_cap_exit_1(tiny_fcidump):
    result = run([
        "scan", "--fcidump", str(tiny_fcidump), "--method", "fci",
        "--sectors", "2,1", "--fci-cap", "5",
    ])
    assert result.exit_code == 1
    assert "dimension" in result.stderr


def test_validate_ordering_holds(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    result = run([
        "validate", "--fcidump", str(tiny_fcidump), "--restarts", "1",
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "tiny.validate.json").read_text())
    assert doc["violations"] == []
    assert len(doc["rows"]) == sector_count(3)


def test_validate_truncated_iterations_still_ordered(tiny_fcidump, tmp_path):
    # variational ordering holds regardless of convergence
    out = tmp_path / "out"
    result = run([
        "validate", "--fcidump", str(tiny_fcidump), "--max-iter", "1",
        "--restarts", "0", "--grad-tol", "1e-13", "--out", str(out),
    ])
    assert result.exit_code == 2, result.output
    doc = json.loads((out / "tiny.validate.json").read_text())
    assert doc["violations"] == []


def test_scaling_command(tiny_fcidump, tmp_path, rng):
    paths = []
    for k, n in enumerate((2, 3)):
        ham = random_hamiltonian(rng, n, g_scale=0.2)
        p = tmp_path / f"chain{n}.fcidump"
        write_fcidump(ham, p, nelec=n, ms2=0)
        paths.append((n, p))
    manifest = {
        "method": "hf",
        "series": "toy_length",
        "entries": [
            {"path": str(p), "format": "fcidump", "x": n, "label": f"n{n}"}
            for n, p in paths
        ],
    }
    mpath = tmp_path / "manifest.json"
    mpath.write_text(json.dumps(manifest))
    out = tmp_path / "out"
    result = run(["scaling", "--manifest", str(mpath), "--restarts", "1", "--out", str(out)])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "toy_length.scaling.json").read_text())
    assert set(doc["scaling"]["series"]) == {"delta", "delta_s", "delta_mu"}
    assert (out / "toy_length.scaling.csv").read_text().startswith("x,delta_half")
    assert (out / "toy_length_delta.csv").exists()


def test_scaling_failed_fixture_excluded_exit_2(tiny_fcidump, tmp_path):
    manifest = {
        "method": "hf",
        "series": "partial",
        "entries": [
            {"path": str(tiny_fcidump), "format": "fcidump", "x": 3},
            {"path": str(tmp_path / "missing.fcidump"), "format": "fcidump", "x": 4},
        ],
    }
    mpath = tmp_path / "manifest.json"
    mpath.write_text(json.dumps(manifest))
    out = tmp_path / "out"
    result = run(["scaling", "--manifest", str(mpath), "--restarts", "1", "--out", str(out)])
    assert result.exit_code == 2
    doc = json.loads((out / "partial.scaling.json").read_text())
    assert len(doc["failures"]) == 1
    assert len(doc["scaling"]["series"]["delta"]) == 1


def test_jobs_env_default(tiny_fcidump, tmp_path, monkeypatch):
    monkeypatch.setenv("SPECBOUND_JOBS", "2")
    out = tmp_path / "out"
    result = run([
        "scan", "--fcidump", str(tiny_fcidump), "--method", "fci",
        "--sectors", "canonical", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads((out / "tiny.scan.json").read_text())
    assert doc["config"]["jobs"] == 2


def test_outputs_carry_version_and_config(tiny_fcidump, tmp_path):
    out = tmp_path / "out"
    run([
        "scan", "--fcidump", str(tiny_fcidump), "--method", "fci",
        "--sectors", "1,1", "--out", str(out),
    ])
    doc = json.loads((out / "tiny.scan.json").read_text())
    assert doc["version"]
    assert doc["config"]["sectors"] == "1,1"
