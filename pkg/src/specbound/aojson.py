"""AO-JSON ingestion and Loewdin pre-orthogonalization.

AO-JSON is a flat UTF-8 JSON document: integer ``n_ao``, number
``e_const``, row-major flat arrays ``S`` and ``h`` of length n_ao^2, a
row-major flat array ``g`` of length n_ao^4 with index
(((p*n + q)*n + r)*n + s), and an optional ``meta`` object.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any

import numpy as np

from .hamiltonian import AOBundle, HamiltonianError, SpinFreeHamiltonian
from .orbital_rotation import four_index_transform

CONDITION_LIMIT = 1e12


class AOJsonError(ValueError):
    """Malformed AO-JSON document."""


def _is_existing_path(source: str) -> bool:
    try:
        return Path(source).exists()
    except OSError:
        return False


def _load_document(source: Any) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and _is_existing_path(source)):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, str):
        text = source
    elif hasattr(source, "read"):
        text = source.read()
    else:
        raise AOJsonError(f"unsupported AO-JSON source {type(source)!r}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AOJsonError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise AOJsonError("AO-JSON top level must be an object")
    return doc


def _flat_array(doc: dict, key: str, length: int) -> np.ndarray:
    if key not in doc:
        raise AOJsonError(f"missing field {key!r}")
    arr = np.asarray(doc[key], dtype=float)
    if arr.ndim != 1 or arr.size != length:
        raise AOJsonError(
            f"field {key!r} must be a flat array of length {length}, got size {arr.size}"
        )
    return arr


def parse_ao_bundle(source: Any) -> AOBundle:
    """Parse and dimension-check an AO-JSON document into an AOBundle."""
    doc = _load_document(source)
    if "n_ao" not in doc:
        raise AOJsonError("missing field 'n_ao'")
    n = int(doc["n_ao"])
    if n < 1:
        raise AOJsonError(f"n_ao must be positive, got {n}")
    e_const = float(doc.get("e_const", 0.0))
    S = _flat_array(doc, "S", n * n).reshape(n, n)
    h = _flat_array(doc, "h", n * n).reshape(n, n)
    g = _flat_array(doc, "g", n**4).reshape(n, n, n, n)
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise AOJsonError("'meta' must be an object")
    try:
        return AOBundle.from_arrays(e_const, S, h, g, meta=meta)
    except HamiltonianError as exc:
        raise AOJsonError(str(exc)) from exc


def write_ao_bundle(bundle: AOBundle, target: str | Path | IO[str]) -> None:
    doc = {
        "n_ao": bundle.n_ao,
        "e_const": bundle.e_const,
        "S": bundle.S.ravel().tolist(),
        "h": bundle.h_ao.ravel().tolist(),
        "g": bundle.g_ao.ravel().tolist(),
        "meta": dict(bundle.meta),
    }
    text = json.dumps(doc)
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def inverse_sqrt_overlap(S: np.ndarray, condition_limit: float = CONDITION_LIMIT) -> np.ndarray:
    """S^{-1/2} by symmetric eigendecomposition; rejects near-singular S."""
    w, V = np.linalg.eigh(S)
    if w[0] <= 0:
        raise HamiltonianError(
            f"overlap not positive definite: lowest eigenvalue {w[0]:.6e}"
        )
    cond = float(w[-1] / w[0])
    if cond > condition_limit:
        raise HamiltonianError(
            f"overlap condition number {cond:.3e} exceeds {condition_limit:.0e}; "
            "prune near-linearly-dependent basis functions"
        )
    return (V / np.sqrt(w)) @ V.T


def lowdin_orthogonalize(bundle: AOBundle) -> SpinFreeHamiltonian:
    """Pre-orthogonalized integrals h_pq = sum h_uv [S^-1/2]_up [S^-1/2]_vq etc."""
    X = inverse_sqrt_overlap(bundle.S)
    h = X.T @ bundle.h_ao @ X
    g = four_index_transform(bundle.g_ao, X)
    prov = {
        "format": "ao-json+lowdin",
        "n_ao": bundle.n_ao,
        **({"meta": dict(bundle.meta)} if bundle.meta else {}),
    }
    return SpinFreeHamiltonian.from_arrays(bundle.e_const, h, g, provenance=prov)
