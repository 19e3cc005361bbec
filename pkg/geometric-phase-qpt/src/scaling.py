"""
Finite-size-scaling engine
Pseudo-critical peak search, logarithmic and power-law regressions, and the exponents
ν = |κ₂/κ₁| and z extracted from them
"""

import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from errors import FitError, InvalidParameterError, PeakBracketError
from models import FitKind, ModelKind, PeakLocation, ProbeParams, ScalingFit, ScalingReport, XYParams
from probe_qubit import probe_derivative
from xy_chain import excitation_gap, phase_derivative_finite, phase_derivative_limit, xx_limit_derivative

logger = logging.getLogger(__name__)

PEAK_TOLERANCE = 1e-7
DEFAULT_BRACKET = (0.5, 1.2)
DEFAULT_SIZES = (21, 101, 501, 1001, 5001, 10001)
MIN_FIT_POINTS = 4
LOG_SIZE_MIN_DECADES = 1.5
DISTANCE_WINDOW = (1e-6, 1e-2)

Curve = Callable[[float], float]


def locate_peak(curve: Curve, bracket: Tuple[float, float] = DEFAULT_BRACKET,
                tol: float = PEAK_TOLERANCE, n_sites: Optional[int] = None) -> PeakLocation:
    """Maximize a unimodal curve inside the bracket

    Bounded Brent search on -curve down to an interval of tol.

    Raises:
        PeakBracketError: the maximum is pinned to a bracket end or lower than an end value
    """
    lower, upper = float(bracket[0]), float(bracket[1])
    if not upper > lower:
        raise InvalidParameterError(f"empty bracket ({lower}, {upper})")
    result = optimize.minimize_scalar(lambda x: -curve(x), bounds=(lower, upper),
                                      method="bounded",
                                      options={"xatol": tol, "maxiter": 1000})
    position = float(result.x)
    height = float(curve(position))
    end_values = (float(curve(lower)), float(curve(upper)))
    width = upper - lower
    if (position - lower <= 10 * tol or upper - position <= 10 * tol
            or height < max(end_values)):
        raise PeakBracketError(
            f"maximum at {position:.6g} is not interior to ({lower:g}, {upper:g})",
            suggested_bracket=(lower - width / 2.0, upper + width / 2.0),
        )
    return PeakLocation(lambda_m=position, height=height, bracket=(lower, upper), n_sites=n_sites)


def _locate_with_retry(curve: Curve, bracket: Tuple[float, float], n_sites: Optional[int]) -> PeakLocation:
    try:
        return locate_peak(curve, bracket, n_sites=n_sites)
    except PeakBracketError as e:
        logger.debug("retrying peak search for N=%s on %s", n_sites, e.suggested_bracket)
        return locate_peak(curve, e.suggested_bracket, n_sites=n_sites)


def peak_table(curve_for_size: Callable[[int], Curve], sizes: Iterable[int],
               bracket: Tuple[float, float] = DEFAULT_BRACKET) -> List[PeakLocation]:
    """Peak position and height of curve_for_size(N) for every N, one widened retry each"""
    return [_locate_with_retry(curve_for_size(size), bracket, size) for size in sizes]


def _regress(points: Sequence[Tuple[float, float]], kind: FitKind) -> ScalingFit:
    ordered = sorted((float(x), float(y)) for x, y in points)
    if len(ordered) < MIN_FIT_POINTS:
        raise FitError(f"{kind.value} fit needs at least {MIN_FIT_POINTS} points, got {len(ordered)}")
    x = np.array([point[0] for point in ordered])
    y = np.array([point[1] for point in ordered])
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError(f"{kind.value} fit got non-finite input")
    if np.ptp(x) == 0.0:
        raise FitError(f"{kind.value} fit is rank deficient (all abscissae equal)")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    spread = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - residual / spread if spread > 0.0 else 1.0
    return ScalingFit(slope=float(slope), intercept=float(intercept),
                      r_squared=r_squared, kind=kind, n_points=len(ordered))


def fit_linear(points: Sequence[Tuple[float, float]]) -> ScalingFit:
    """Ordinary least squares of value against x"""
    return _regress(points, FitKind.LINEAR)


def fit_log_size(points: Sequence[Tuple[float, float]]) -> ScalingFit:
    """value = κ₁ ln N + c; slope is κ₁"""
    sizes = np.array([float(size) for size, _ in points])
    if np.any(sizes <= 0):
        raise FitError("sizes must be positive")
    if len(sizes) and math.log10(sizes.max() / sizes.min()) < LOG_SIZE_MIN_DECADES:
        raise FitError(f"sizes must span at least {LOG_SIZE_MIN_DECADES} decades")
    return _regress([(math.log(size), value) for size, value in points], FitKind.LOG_SIZE)


def fit_log_distance(points: Sequence[Tuple[float, float]], lambda_c: float = 1.0,
                     window: Optional[Tuple[float, float]] = DISTANCE_WINDOW) -> ScalingFit:
    """value = κ₂ ln|λ - λ_c| + c on one side of λ_c; slope is κ₂"""
    offsets = [lam - lambda_c for lam, _ in points]
    if any(offset == 0.0 for offset in offsets):
        raise FitError(f"a point sits exactly on lambda_c={lambda_c}")
    if any(offset > 0 for offset in offsets) and any(offset < 0 for offset in offsets):
        raise FitError(f"points straddle lambda_c={lambda_c}")
    if window is not None:
        # relative slack for λ_c - d rounding
        low, high = window[0] * (1 - 1e-9), window[1] * (1 + 1e-9)
        outside = [abs(offset) for offset in offsets if not low <= abs(offset) <= high]
        if outside:
            low, high = window
            raise FitError(f"|lambda - lambda_c| = {outside[0]:.3g} outside [{low:g}, {high:g}]")
    return _regress([(math.log(abs(offset)), value) for offset, (_, value) in zip(offsets, points)],
                    FitKind.LOG_DISTANCE)


def fit_power_law(points: Sequence[Tuple[float, float]]) -> ScalingFit:
    """ln(distance) against ln N; the exponent is minus the slope"""
    for size, distance in points:
        if size <= 0 or distance <= 0:
            raise FitError(f"power-law fit needs positive data, got ({size}, {distance})")
    return _regress([(math.log(size), math.log(distance)) for size, distance in points],
                    FitKind.POWER_LAW)


def critical_exponent(kappa1: float, kappa2: float) -> float:
    """ν = |κ₂/κ₁|"""
    if kappa1 == 0.0 or not math.isfinite(kappa1):
        raise FitError(f"kappa1 must be finite and nonzero, got {kappa1}")
    return abs(kappa2 / kappa1)


def dynamical_exponent(gamma: float, lambda_c: float = 1.0) -> float:
    """Slope of ln Λ_φ against ln φ at the critical field, φ ∈ [1e-4, 1e-3]"""
    if not math.isfinite(gamma) or gamma < 0.0:
        raise InvalidParameterError(f"gamma must be finite and >= 0, got {gamma}")
    phi = np.logspace(-4, -3, 16)
    gaps = excitation_gap(gamma, lambda_c, phi)
    fit = fit_power_law(list(zip(phi, gaps)))
    return fit.slope


def _distance_points(derivative: Curve, lambda_c: float = 1.0, count: int = 17) -> List[Tuple[float, float]]:
    distances = np.logspace(math.log10(DISTANCE_WINDOW[0]), math.log10(DISTANCE_WINDOW[1]), count)
    return [(lambda_c - distance, derivative(lambda_c - distance)) for distance in distances]


def _xy_curve(gamma: float, n_sites: int) -> Curve:
    def curve(lam: float) -> float:
        return phase_derivative_finite(XYParams(gamma=gamma, lam=lam, n_sites=n_sites)) / math.pi
    return curve


def _kappa_fits(peaks: List[PeakLocation], limit_curve: Curve) -> dict:
    fits = {
        "kappa1": fit_log_size([(peak.n_sites, peak.height) for peak in peaks]),
        "kappa2": fit_log_distance(_distance_points(limit_curve)),
        "shift": fit_power_law([(peak.n_sites, abs(1.0 - peak.lambda_m)) for peak in peaks]),
    }
    for name, fit in fits.items():
        logger.debug("%s fit: slope %.5f R²=%.5f over %d points", name, fit.slope, fit.r_squared, fit.n_points)
    return fits


def xy_scaling_report(gamma: float, sizes: Sequence[int] = DEFAULT_SIZES) -> ScalingReport:
    """κ₁, κ₂, ν, the peak shift exponent and z for the XY chain

    Derivatives are taken in units of π. At γ = 0 the chain has no finite-size peak and
    ν comes from the power law of the closed-form XX derivative against 1 - λ.
    """
    if gamma == 0.0:
        xx = fit_power_law([(distance, xx_limit_derivative(1.0 - distance))
                            for distance in np.logspace(-6, -2, 17)])
        return ScalingReport(model=ModelKind.XY, gamma=gamma, nu=xx.exponent,
                             z=dynamical_exponent(0.0), fits={"xx_derivative": xx})

    peaks = peak_table(lambda size: _xy_curve(gamma, size), sizes)
    fits = _kappa_fits(peaks, lambda lam: phase_derivative_limit(gamma, lam) / math.pi)
    kappa1, kappa2 = fits["kappa1"].slope, fits["kappa2"].slope
    return ScalingReport(
        model=ModelKind.XY,
        gamma=gamma,
        kappa1=kappa1,
        kappa2=kappa2,
        nu=critical_exponent(kappa1, kappa2),
        shift_exponent=fits["shift"].exponent,
        z=dynamical_exponent(gamma),
        peaks=peaks,
        fits=fits,
    )


def probe_scaling_report(mu: float, nu: float, eta: float, gamma: float,
                         sizes: Sequence[int] = (13, 51, 251, 501)) -> ScalingReport:
    """Same pipeline driven by the probe-qubit derivative dβ_g/dλ (units of π)"""
    if gamma == 0.0:
        raise InvalidParameterError("probe scaling needs gamma > 0")

    def curve_for_size(size: Optional[int]) -> Curve:
        def curve(lam: float) -> float:
            params = ProbeParams(mu=mu, nu=nu, eta=eta, gamma=gamma, lam=lam, n_sites=size)
            return probe_derivative(params) / math.pi
        return curve

    peaks = peak_table(curve_for_size, sizes)
    fits = _kappa_fits(peaks, curve_for_size(None))
    kappa1, kappa2 = fits["kappa1"].slope, fits["kappa2"].slope
    return ScalingReport(
        model=ModelKind.PROBE,
        gamma=gamma,
        kappa1=kappa1,
        kappa2=kappa2,
        nu=critical_exponent(kappa1, kappa2),
        shift_exponent=fits["shift"].exponent,
        z=dynamical_exponent(gamma),
        peaks=peaks,
        fits=fits,
    )
