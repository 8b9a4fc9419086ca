"""FCIDUMP reader and writer.

The format is the usual text interchange for (e_const, h_pq, g_pqrs): a
Fortran-style namelist header with NORB, NELEC and MS2 followed by records
``value i j k l`` with 1-based indices.  Records with all four indices zero
carry the energy constant, records with k = l = 0 carry h_ij, and everything
else is a two-electron integral (ij|kl) in chemist convention.  Only one
representative per 8-fold symmetry orbit needs to be present; the parser
completes the orbit.  Conflicting duplicate records are rejected rather than
silently overwritten.
"""

from __future__ import annotations

import hashlib
import io
import re
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .hamiltonian import (
    SpinFreeHamiltonian,
    canonical_quadruple,
    eightfold_images,
)
from .sectors import SymmetrySector

DUPLICATE_TOL = 1e-10

_HEADER_KEY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^=&/]*?)(?=(?:,?\s*[A-Za-z_][A-Za-z0-9_]*\s*=)|$)")


class FcidumpError(ValueError):
    """Malformed FCIDUMP content."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


def _as_text_stream(source: str | Path | IO[str]) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8")
    return source


def _parse_header(lines: Iterable[tuple[int, str]]) -> tuple[dict, int]:
    """Collect the namelist text up to &END or /; returns fields and last line no."""
    chunks: list[str] = []
    started = False
    last_no = 0
    for no, line in lines:
        last_no = no
        text = line.strip()
        if not started:
            if not text:
                continue
            if not text.upper().startswith("&"):
                raise FcidumpError("expected namelist header starting with '&'", no)
            started = True
            text = text[1:]
            # drop the namelist name token (FCI, NAMELIST, ...)
            text = re.sub(r"^[A-Za-z0-9_]+", "", text)
        upper = text.upper()
        end = None
        for marker in ("&END", "/"):
            pos = upper.find(marker)
            if pos >= 0 and (end is None or pos < end[0]):
                end = (pos, marker)
        if end is not None:
            chunks.append(text[: end[0]])
            body = " ".join(chunks)
            fields = {}
            for m in _HEADER_KEY.finditer(body):
                fields[m.group(1).upper()] = m.group(2).strip().rstrip(",").strip()
            return fields, last_no
        chunks.append(text)
    raise FcidumpError("header not terminated by &END or /", last_no)


def _header_int(fields: dict, key: str, line_no: int) -> int:
    if key not in fields:
        raise FcidumpError(f"header missing {key}", line_no)
    raw = fields[key].split(",")[0].strip()
    try:
        return int(raw)
    except ValueError as exc:
        raise FcidumpError(f"cannot parse {key}={fields[key]!r}", line_no) from exc


def parse_fcidump(
    source: str | Path | IO[str],
    provenance: dict | None = None,
) -> SpinFreeHamiltonian:
    """Parse an FCIDUMP stream or file into a SpinFreeHamiltonian.

    NELEC and MS2 from the header are retained in the provenance as the
    suggested default sector; they do not constrain anything downstream.
    """
    close = isinstance(source, (str, Path))
    path = str(source) if close else None
    stream = _as_text_stream(source)
    try:
        text = stream.read()
    finally:
        if close:
            stream.close()

    numbered = list(enumerate(text.splitlines(), start=1))
    fields, header_end = _parse_header(iter(numbered))
    n_orb = _header_int(fields, "NORB", header_end)
    if n_orb < 1:
        raise FcidumpError(f"NORB must be positive, got {n_orb}", header_end)
    nelec = _header_int(fields, "NELEC", header_end) if "NELEC" in fields else None
    ms2 = _header_int(fields, "MS2", header_end) if "MS2" in fields else None

    e_const = 0.0
    e_const_line: int | None = None
    h_entries: dict[tuple[int, int], tuple[float, int]] = {}
    g_entries: dict[tuple[int, int, int, int], tuple[float, int]] = {}

    for no, line in numbered[header_end:]:
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 5:
            raise FcidumpError(
                f"expected 'value i j k l', got {len(parts)} fields", no
            )
        try:
            value = float(parts[0].replace("D", "e").replace("d", "e"))
        except ValueError as exc:
            raise FcidumpError(f"cannot parse value {parts[0]!r}", no) from exc
        try:
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"cannot parse indices {parts[1:]!r}", no) from exc

        if i == j == k == l == 0:
            if e_const_line is not None and abs(value - e_const) > DUPLICATE_TOL:
                raise FcidumpError(
                    f"conflicting energy constant (earlier line {e_const_line})", no
                )
            if e_const_line is None:
                e_const = value
                e_const_line = no
            continue

        for name, idx in (("i", i), ("j", j)):
            if not 1 <= idx <= n_orb:
                raise FcidumpError(f"index {name}={idx} outside [1, {n_orb}]", no)

        if k == 0 and l == 0:
            if j == 0:
                raise FcidumpError("one-electron record with j=0", no)
            key = (max(i, j) - 1, min(i, j) - 1)
            prior = h_entries.get(key)
            if prior is not None and abs(prior[0] - value) > DUPLICATE_TOL:
                raise FcidumpError(
                    f"conflicting duplicate h[{key[0] + 1},{key[1] + 1}] "
                    f"(earlier line {prior[1]})",
                    no,
                )
            if prior is None:
                h_entries[key] = (value, no)
            continue

        for name, idx in (("k", k), ("l", l)):
            if not 1 <= idx <= n_orb:
                raise FcidumpError(f"index {name}={idx} outside [1, {n_orb}]", no)
        key4 = canonical_quadruple(i - 1, j - 1, k - 1, l - 1)
        prior4 = g_entries.get(key4)
        if prior4 is not None and abs(prior4[0] - value) > DUPLICATE_TOL:
            raise FcidumpError(
                f"conflicting duplicate g{tuple(x + 1 for x in key4)} "
                f"(earlier line {prior4[1]})",
                no,
            )
        if prior4 is None:
            g_entries[key4] = (value, no)

    h = np.zeros((n_orb, n_orb))
    for (p, q), (value, _) in h_entries.items():
        h[p, q] = value
        h[q, p] = value
    g = np.zeros((n_orb, n_orb, n_orb, n_orb))
    for (p, q, r, s), (value, _) in g_entries.items():
        for img in eightfold_images(p, q, r, s):
            g[img] = value

    prov = {
        "format": "fcidump",
        "norb": n_orb,
        "nelec": nelec,
        "ms2": ms2,
    }
    if path is not None:
        prov["path"] = path
        prov["sha256"] = hashlib.sha256(text.encode()).hexdigest()
    if provenance:
        prov.update(provenance)
    return SpinFreeHamiltonian.from_arrays(e_const, h, g, provenance=prov)


def suggested_sector(ham: SpinFreeHamiltonian) -> SymmetrySector | None:
    """Default sector from the NELEC/MS2 header values, if present."""
    nelec = ham.provenance.get("nelec")
    ms2 = ham.provenance.get("ms2")
    if nelec is None:
        return None
    ms2 = 0 if ms2 is None else ms2
    if (nelec + ms2) % 2 != 0:
        return None
    n_alpha = (nelec + ms2) // 2
    n_beta = nelec - n_alpha
    if n_beta < 0 or n_alpha < 0:
        return None
    return SymmetrySector(n_alpha, n_beta)


def write_fcidump(
    ham: SpinFreeHamiltonian,
    target: str | Path | IO[str],
    nelec: int | None = None,
    ms2: int | None = None,
    zero_tol: float = 0.0,
) -> None:
    """Write canonical entries only: p >= q and pair_index(pq) >= pair_index(rs).

    Values are formatted with 17 significant digits so a round trip is exact.
    """
    if nelec is None:
        nelec = ham.provenance.get("nelec") or 0
    if ms2 is None:
        ms2 = ham.provenance.get("ms2") or 0
    n = ham.n_orb

    buf = io.StringIO()
    buf.write(f" &FCI NORB={n},NELEC={nelec},MS2={ms2},\n")
    buf.write("  ORBSYM=" + "1," * n + "\n")
    buf.write("  ISYM=1,\n")
    buf.write(" &END\n")
    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_top = q if r == p else r
                for s in range(s_top + 1):
                    value = ham.g[p, q, r, s]
                    if abs(value) > zero_tol:
                        buf.write(
                            f" {value:.17g} {p + 1} {q + 1} {r + 1} {s + 1}\n"
                        )
    for p in range(n):
        for q in range(p + 1):
            value = ham.h[p, q]
            if abs(value) > zero_tol:
                buf.write(f" {value:.17g} {p + 1} {q + 1} 0 0\n")
    buf.write(f" {ham.e_const:.17g} 0 0 0 0\n")

    data = buf.getvalue()
    if isinstance(target, (str, Path)):
        Path(target).write_text(data, encoding="utf-8")
    else:
        target.write(data)
