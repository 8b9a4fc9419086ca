"""Log-log scaling fits and plot-data emission for bound series.

Series collect one spectral-bound tier against a size variable (orbital
count or chain length); fits are unweighted least squares on (ln x, ln y),
so the slope is the power-law exponent and exp(intercept) the prefactor.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

TIERS = ("delta", "delta_s", "delta_mu")


class ScalingError(ValueError):
    pass


@dataclass(frozen=True)
class SeriesPoint:
    x: float
    y: float
    tier: str
    label: str = ""


@dataclass(frozen=True)
class FitResult:
    exponent: float
    prefactor: float
    r_squared: float
    n_points: int


def fit_power_law(points: list[SeriesPoint]) -> FitResult:
    """Least-squares line on (ln x, ln y); requires >= 2 positive points."""
    if len(points) < 2:
        raise ScalingError(f"need at least 2 points to fit, got {len(points)}")
    x = np.array([p.x for p in points], dtype=float)
    y = np.array([p.y for p in points], dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ScalingError("power-law fit requires positive x and y")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        r_squared=min(1.0, r2),
        n_points=len(points),
    )


def build_series(reports, x_values, labels=None) -> dict[str, list[SeriesPoint]]:
    """One point list per tier from bound reports sharing a method.

    ``reports`` and ``x_values`` run in parallel; unconverged reports are the
    caller's responsibility to exclude (the CLI drops and lists them).
    """
    if len(reports) != len(x_values):
        raise ScalingError("reports and x values differ in length")
    methods = {r.method for r in reports}
    if len(methods) > 1:
        raise ScalingError(f"mixed methods in series: {sorted(methods)}")
    labels = labels or ["" for _ in reports]
    series: dict[str, list[SeriesPoint]] = {t: [] for t in TIERS}
    order = np.argsort(np.asarray(x_values, dtype=float))
    for idx in order:
        r = reports[idx]
        values = r.coherent_totals()
        for tier in TIERS:
            series[tier].append(
                SeriesPoint(x=float(x_values[idx]), y=values[tier], tier=tier, label=labels[idx])
            )
    return series


def emit_plotdata(
    series: dict[str, list[SeriesPoint]],
    fits: dict[str, FitResult] | None = None,
) -> dict:
    """CSV plus JSON-ready document with per-tier points and fit lines."""
    fits = fits or {}
    xs = sorted({p.x for pts in series.values() for p in pts})
    by_tier = {
        tier: {p.x: p.y for p in pts} for tier, pts in series.items()
    }
    buf = io.StringIO()
    buf.write("x," + ",".join(f"{t}_half" for t in TIERS) + "\n")
    for x in xs:
        row = [f"{x:.12g}"]
        for t in TIERS:
            v = by_tier.get(t, {}).get(x)
            row.append("" if v is None else f"{v:.12g}")
        buf.write(",".join(row) + "\n")

    doc = {
        "schema": "specbound.scaling/1",
        "series": {
            tier: [
                {"x": p.x, "y": p.y, "label": p.label} for p in pts
            ]
            for tier, pts in series.items()
        },
        "fits": {
            tier: {
                "exponent": f.exponent,
                "prefactor": f.prefactor,
                "r_squared": f.r_squared,
                "n_points": f.n_points,
            }
            for tier, f in fits.items()
        },
    }
    return {"csv": buf.getvalue(), "json": doc}


def parse_plotdata_csv(text: str) -> dict[str, list[SeriesPoint]]:
    """Inverse of the CSV layout written by emit_plotdata."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    tiers = [name[: -len("_half")] for name in header[1:]]
    series: dict[str, list[SeriesPoint]] = {t: [] for t in tiers}
    for ln in lines[1:]:
        cells = ln.split(",")
        x = float(cells[0])
        for tier, cell in zip(tiers, cells[1:]):
            if cell:
                series[tier].append(SeriesPoint(x=x, y=float(cell), tier=tier))
    return series
