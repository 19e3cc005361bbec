import math

import numpy as np
import pytest

from errors import FitError, InvalidParameterError, PeakBracketError
from models import FitKind, ModelKind, XYParams
from scaling import (DEFAULT_SIZES, critical_exponent, dynamical_exponent, fit_linear, fit_log_distance,
                     fit_log_size, fit_power_law, locate_peak, peak_table, probe_scaling_report,
                     xy_scaling_report)
from xy_chain import phase_derivative_finite, phase_derivative_limit


def xy_curve(gamma, n_sites):
    return lambda lam: phase_derivative_finite(XYParams(gamma=gamma, lam=lam, n_sites=n_sites)) / math.pi


def test_locate_peak_on_quadratic():
    peak = locate_peak(lambda x: -(x - 0.3) ** 2, (0.0, 1.0))
    assert peak.lambda_m == pytest.approx(0.3, abs=1e-6)
    assert peak.height == pytest.approx(0.0, abs=1e-12)
    assert peak.bracket == (0.0, 1.0)


def test_locate_peak_rejects_monotone_curve():
    with pytest.raises(PeakBracketError) as excinfo:
        locate_peak(lambda x: x, (0.0, 1.0))
    assert excinfo.value.suggested_bracket == (-0.5, 1.5)


def test_locate_peak_rejects_empty_bracket():
    with pytest.raises(InvalidParameterError):
        locate_peak(lambda x: -x * x, (1.0, 1.0))


def test_peak_table_retries_with_wider_bracket():
    peaks = peak_table(lambda size: (lambda x: -(x - 1.4) ** 2), [5, 7], bracket=(0.5, 1.2))
    assert [peak.n_sites for peak in peaks] == [5, 7]
    assert all(peak.lambda_m == pytest.approx(1.4, abs=1e-6) for peak in peaks)


def test_fit_log_size_recovers_synthetic_slope():
    points = [(n, 0.3121 * math.log(n) + 2.0) for n in DEFAULT_SIZES]
    fit = fit_log_size(points)
    assert fit.slope == pytest.approx(0.3121, abs=1e-12)
    assert fit.intercept == pytest.approx(2.0, abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.kind == FitKind.LOG_SIZE
    assert fit.n_points == 6


def test_fits_ignore_point_order():
    points = [(n, 0.3 * math.log(n) + 0.01 * (-1) ** n) for n in (21, 101, 501, 1001, 5001)]
    shuffled = [points[i] for i in (3, 0, 4, 2, 1)]
    assert fit_log_size(points) == fit_log_size(shuffled)


def test_fit_log_size_needs_range_and_points():
    with pytest.raises(FitError):
        fit_log_size([(n, 1.0) for n in (21, 31, 41, 51)])
    with pytest.raises(FitError):
        fit_log_size([(21, 1.0), (1001, 2.0), (10001, 3.0)])
    with pytest.raises(FitError):
        fit_log_size([(0, 1.0), (21, 1.0), (1001, 2.0), (10001, 3.0)])


def test_fit_log_distance_recovers_synthetic_slope():
    distances = np.logspace(-6, -2, 9)
    points = [(1.0 - d, -0.3123 * math.log(d) + 1.0) for d in distances]
    fit = fit_log_distance(points)
    assert fit.slope == pytest.approx(-0.3123, rel=1e-6)
    assert fit.kind == FitKind.LOG_DISTANCE


def test_fit_log_distance_rejects_bad_points():
    below = [(1.0 - d, 1.0 + d) for d in (1e-5, 1e-4, 1e-3)]
    with pytest.raises(FitError, match="straddle"):
        fit_log_distance(below + [(1.0 + 1e-4, 2.0)])
    with pytest.raises(FitError):
        fit_log_distance(below + [(1.0, 2.0)])
    with pytest.raises(FitError):
        fit_log_distance(below + [(0.5, 2.0)])
    assert fit_log_distance(below + [(0.5, 2.0)], window=None).n_points == 4


def test_fit_power_law_recovers_exponent():
    points = [(n, n ** -1.803) for n in DEFAULT_SIZES]
    fit = fit_power_law(points)
    assert fit.exponent == pytest.approx(1.803, rel=1e-10)
    with pytest.raises(FitError):
        fit_power_law(points[:3] + [(10001, 0.0)])


def test_fit_linear_preconditions():
    assert fit_linear([(1, 3.0), (2, 5.0), (3, 7.0), (4, 9.0)]).slope == pytest.approx(2.0)
    with pytest.raises(FitError):
        fit_linear([(1, 1.0), (1, 2.0), (1, 3.0), (1, 4.0)])
    with pytest.raises(FitError):
        fit_linear([(1, 1.0), (2, float("nan")), (3, 3.0), (4, 4.0)])


def test_critical_exponent():
    assert critical_exponent(0.3121, -0.3123) == pytest.approx(1.0006, abs=1e-4)
    assert critical_exponent(0.4, -0.4) == 1.0
    with pytest.raises(FitError):
        critical_exponent(0.0, -0.3)


@pytest.mark.parametrize("gamma, expected, tolerance", [(1.0, 1.0, 1e-3), (0.0, 2.0, 1e-3), (0.5, 1.0, 1e-2)])
def test_dynamical_exponent(gamma, expected, tolerance):
    assert dynamical_exponent(gamma) == pytest.approx(expected, abs=tolerance)


def test_ising_peak_drifts_toward_critical_field():
    small, large = peak_table(lambda size: xy_curve(1.0, size), [21, 101])
    assert small.lambda_m < large.lambda_m < 1.0
    assert large.height > small.height


def test_large_chain_peak_near_critical_field():
    (peak,) = peak_table(lambda size: xy_curve(1.0, size), [10001])
    assert abs(peak.lambda_m - 1.0) < 1e-3


def test_ising_limit_log_divergence():
    points = [(1.0 - d, phase_derivative_limit(1.0, 1.0 - d) / math.pi) for d in np.logspace(-6, -2, 17)]
    assert fit_log_distance(points).slope == pytest.approx(-0.3123, abs=0.02)


def test_xx_report():
    report = xy_scaling_report(0.0)
    assert report.model == ModelKind.XY
    assert report.nu == pytest.approx(0.5, abs=0.02)
    assert report.z == pytest.approx(2.0, abs=1e-3)
    assert report.kappa1 is None
    assert report.fits["xx_derivative"].slope == pytest.approx(-0.5, abs=0.02)


@pytest.mark.slow
def test_ising_report():
    report = xy_scaling_report(1.0)
    assert report.kappa1 == pytest.approx(0.3121, abs=0.02)
    assert report.kappa2 == pytest.approx(-0.3123, abs=0.02)
    assert report.nu == pytest.approx(1.0, abs=0.05)
    assert report.shift_exponent == pytest.approx(1.803, abs=0.15)
    assert report.z == pytest.approx(1.0, abs=1e-3)
    assert len(report.peaks) == len(DEFAULT_SIZES)


@pytest.mark.slow
def test_anisotropic_report_has_unit_exponent():
    report = xy_scaling_report(0.5)
    assert report.fits["kappa1"].r_squared > 0.99
    assert report.nu == pytest.approx(1.0, abs=0.05)


@pytest.mark.slow
def test_probe_report_peaks_drift_toward_critical_field():
    report = probe_scaling_report(0.1, 2.0, 0.5, 1.0)
    distances = [abs(1.0 - peak.lambda_m) for peak in report.peaks]
    assert distances == sorted(distances, reverse=True)
    heights = [peak.height for peak in report.peaks]
    assert heights == sorted(heights)
    assert report.shift_exponent > 0
    assert report.model == ModelKind.PROBE


def test_probe_report_needs_anisotropy():
    with pytest.raises(InvalidParameterError):
        probe_scaling_report(0.1, 2.0, 0.5, 0.0)
