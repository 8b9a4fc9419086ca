"""FCIDUMP and AO-JSON writers (independent of any consumer package)."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def write_fcidump(
    path: str | Path,
    e_const: float,
    h: np.ndarray,
    g: np.ndarray,
    nelec: int,
    ms2: int = 0,
) -> None:
    n = h.shape[0]
    lines = [
        f" &FCI NORB={n},NELEC={nelec},MS2={ms2},",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]
    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_top = q if r == p else r
                for s in range(s_top + 1):
                    v = g[p, q, r, s]
                    if v != 0.0:
                        lines.append(f" {v:.17g} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            if h[p, q] != 0.0:
                lines.append(f" {h[p, q]:.17g} {p + 1} {q + 1} 0 0")
    lines.append(f" {e_const:.17g} 0 0 0 0")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_ao_json(
    path: str | Path,
    e_const: float,
    S: np.ndarray,
    h: np.ndarray,
    g: np.ndarray,
    meta: dict | None = None,
) -> None:
    doc = {
        "n_ao": int(S.shape[0]),
        "e_const": float(e_const),
        "S": S.ravel().tolist(),
        "h": h.ravel().tolist(),
        "g": g.ravel().tolist(),
        "meta": meta or {},
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")
