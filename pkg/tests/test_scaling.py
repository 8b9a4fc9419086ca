import numpy as np
import pytest

from specbound.bounds import BoundsReport
from specbound.scaling import (
    ScalingError,
    SeriesPoint,
    build_series,
    emit_plotdata,
    fit_power_law,
    parse_plotdata_csv,
)
from specbound.sectors import SymmetrySector


def pts(xy, tier="delta"):
    return [SeriesPoint(x=x, y=y, tier=tier) for x, y in xy]


def test_exact_power_law():
    fit = fit_power_law(pts([(1, 2), (2, 4), (4, 8)]))
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)
    assert fit.prefactor == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_constant_series():
    fit = fit_power_law(pts([(1, 3.5), (10, 3.5)]))
    assert fit.exponent == pytest.approx(0.0, abs=1e-12)
    assert fit.prefactor == pytest.approx(3.5, abs=1e-12)


def test_fit_rejects_degenerate_input():
    with pytest.raises(ScalingError):
        fit_power_law(pts([(1, 1)]))
    with pytest.raises(ScalingError):
        fit_power_law(pts([(1, 1), (2, -1)]))
    with pytest.raises(ScalingError):
        fit_power_law(pts([(0, 1), (2, 1)]))


def test_planted_exponent_recovery():
    rng = np.random.default_rng(321)
    misses = 0
    for _ in range(100):
        b = rng.uniform(-1.5, 1.5)
        a = rng.uniform(0.5, 5.0)
        x = np.linspace(4, 40, 10)
        y = a * x**b * np.exp(rng.normal(0.0, 0.01, x.size))
        fit = fit_power_law(pts(list(zip(x, y))))
        if abs(fit.exponent - b) > 0.05:
            misses += 1
    assert misses == 0


def test_scale_equivariance():
    rng = np.random.default_rng(7)
    x = np.array([2.0, 4.0, 8.0, 16.0])
    y = 1.7 * x**0.6 * np.exp(rng.normal(0, 0.05, 4))
    base = fit_power_law(pts(list(zip(x, y))))
    scaled = fit_power_law(pts(list(zip(x, 3.0 * y))))
    assert scaled.exponent == pytest.approx(base.exponent, abs=1e-12)
    assert scaled.prefactor == pytest.approx(3.0 * base.prefactor, rel=1e-12)


def fake_report(x, method="hf"):
    sector = SymmetrySector(1, 1)
    return BoundsReport(
        hamiltonian_id=f"ham-{x}",
        method=method,
        target_sector=sector,
        delta_half=4.0 * x,
        delta_s_half=2.0 * x,
        delta_mu_half={sector: 1.5 * x},
        argmax={},
        unconverged=[],
        warnings=[],
    )


def test_build_series_orders_and_splits_tiers():
    reports = [fake_report(4), fake_report(2), fake_report(8)]
    series = build_series(reports, [4, 2, 8], labels=["c", "a", "b"])
    assert [p.x for p in series["delta"]] == [2, 4, 8]
    assert [p.y for p in series["delta_s"]] == [4.0, 8.0, 16.0]
    assert [p.label for p in series["delta_mu"]] == ["a", "c", "b"]


def test_build_series_rejects_mixed_methods():
    with pytest.raises(ScalingError, match="mixed"):
        build_series([fake_report(2), fake_report(4, method="fci")], [2, 4])


def test_emit_plotdata_and_round_trip():
    reports = [fake_report(x) for x in (2, 4, 8)]
    series = build_series(reports, [2, 4, 8])
    fits = {t: fit_power_law(p) for t, p in series.items()}
    payload = emit_plotdata(series, fits)
    header = payload["csv"].splitlines()[0]
    assert header == "x,delta_half,delta_s_half,delta_mu_half"
    again = parse_plotdata_csv(payload["csv"])
    for tier in series:
        assert [p.x for p in again[tier]] == [p.x for p in series[tier]]
        assert np.max(
            np.abs(np.array([p.y for p in again[tier]]) - np.array([p.y for p in series[tier]]))
        ) <= 1e-12
    assert payload["json"]["fits"]["delta"]["exponent"] == pytest.approx(1.0)


def test_emit_plotdata_points_only():
    series = build_series([fake_report(2), fake_report(4)], [2, 4])
    payload = emit_plotdata(series, fits=None)
    assert payload["json"]["fits"] == {}
    assert len(payload["csv"].splitlines()) == 3
