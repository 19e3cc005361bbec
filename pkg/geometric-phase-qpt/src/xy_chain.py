"""
XY chain geometric phase
Bogoliubov mode angles of the periodic XY chain and the ground-state geometric phase
picked up under the global spin rotation U_phi, for odd N and in the thermodynamic limit
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import integrate

from errors import GaplessModeError, InvalidParameterError, QuadratureError, SingularInputError
from models import CrossingLimit, ParitySector, PhaseMethod, PhaseResult, XYParams

logger = logging.getLogger(__name__)

QUAD_TOLERANCE = 1e-8
QUAD_TOLERANCE_NEAR_SINGULAR = 1e-6
GAPLESS_TOLERANCE = 1e-12
# below this |γ| the limit derivative differs from the XX closed form by O(γ)
XX_GAMMA_CUTOFF = 1e-10

_CROSSING_VALUE = {
    CrossingLimit.GAMMA_ZERO: 0.0,
    CrossingLimit.FIELD_ABOVE: -1.0,
    CrossingLimit.FIELD_BELOW: 1.0,
}


@dataclass(frozen=True)
class ModeAngles:
    """Bogoliubov angle and excitation energy of one (k, -k) pair"""
    k_index: int
    phi_k: float
    lambda_k: float
    cos_theta_k: float
    gapless: bool = False


@dataclass(frozen=True)
class ModeArrays:
    """Vectorised mode data, k = 1..M in ascending order"""
    phi: np.ndarray
    field_term: np.ndarray
    lambda_k: np.ndarray
    cos_theta: np.ndarray
    gapless: np.ndarray


def mode_momenta(n_sites: int, sector: ParitySector = ParitySector.EVEN) -> np.ndarray:
    """Momenta of the paired modes: 2πk/N (even sector) or 2π(k-1/2)/N (odd sector)"""
    m = (n_sites - 1) // 2
    k = np.arange(1, m + 1, dtype=float)
    if sector == ParitySector.ODD:
        k = k - 0.5
    return 2.0 * np.pi * k / n_sites


def field_offset(lam: float, phi) -> np.ndarray:
    """cos(phi) - lambda, written to stay accurate when lambda is close to 1"""
    return (1.0 - lam) - 2.0 * np.sin(np.asarray(phi) / 2.0) ** 2


def excitation_gap(gamma: float, lam: float, phi) -> np.ndarray:
    """Λ_phi = sqrt((λ - cos φ)² + γ² sin² φ)"""
    phi = np.asarray(phi, dtype=float)
    return np.hypot(field_offset(lam, phi), gamma * np.sin(phi))


def mode_arrays(gamma: float, lam: float, n_sites: int,
                sector: ParitySector = ParitySector.EVEN,
                crossing: CrossingLimit = CrossingLimit.GAMMA_ZERO) -> ModeArrays:
    phi = mode_momenta(n_sites, sector)
    offset = field_offset(lam, phi)
    lambda_k = np.hypot(offset, gamma * np.sin(phi))
    gapless = lambda_k <= GAPLESS_TOLERANCE
    safe = np.where(gapless, 1.0, lambda_k)
    cos_theta = np.where(gapless, _CROSSING_VALUE[crossing], offset / safe)
    return ModeArrays(phi=phi, field_term=offset, lambda_k=lambda_k,
                      cos_theta=np.clip(cos_theta, -1.0, 1.0), gapless=gapless)


def mode_angles(params: XYParams, sector: ParitySector = ParitySector.EVEN,
                crossing: CrossingLimit = CrossingLimit.GAMMA_ZERO) -> List[ModeAngles]:
    """Per-mode excitation energies and Bogoliubov angles for k = 1..M"""
    modes = mode_arrays(params.gamma, params.lam, params.n_sites, sector, crossing)
    return [
        ModeAngles(
            k_index=index + 1,
            phi_k=float(modes.phi[index]),
            lambda_k=float(modes.lambda_k[index]),
            cos_theta_k=float(modes.cos_theta[index]),
            gapless=bool(modes.gapless[index]),
        )
        for index in range(len(modes.phi))
    ]


def ground_phase_finite(params: XYParams, sector: ParitySector = ParitySector.EVEN,
                        crossing: CrossingLimit = CrossingLimit.GAMMA_ZERO) -> PhaseResult:
    """Scaled phase (π/M) Σ (1 - cos θ_k); the unscaled sum is kept in raw_sum"""
    modes = mode_arrays(params.gamma, params.lam, params.n_sites, sector, crossing)
    raw = float(np.pi * np.sum(1.0 - modes.cos_theta))
    gapless = int(np.count_nonzero(modes.gapless))
    if gapless:
        logger.warning("%d gapless mode(s) at gamma=%g lambda=%g N=%d; using %s limit",
                       gapless, params.gamma, params.lam, params.n_sites, crossing.value)
    return PhaseResult(
        beta_g=raw / params.m,
        method=PhaseMethod.FINITE_SUM,
        params={"gamma": params.gamma, "lambda": params.lam, "n_sites": params.n_sites},
        scaled=True,
        raw_sum=raw,
        gapless_modes=gapless,
    )


def phase_derivative_finite(params: XYParams,
                            sector: ParitySector = ParitySector.EVEN) -> float:
    """dβ_g/dλ = (π/M) Σ γ² sin² φ_k / Λ_k³"""
    modes = mode_arrays(params.gamma, params.lam, params.n_sites, sector)
    if modes.gapless.any():
        count = int(np.count_nonzero(modes.gapless))
        raise GaplessModeError(
            f"{count} mode(s) with Λ_k = 0 at gamma={params.gamma} lambda={params.lam}",
            gapless_modes=count,
        )
    terms = (params.gamma * np.sin(modes.phi)) ** 2 / modes.lambda_k ** 3
    return float(np.pi * np.sum(terms) / params.m)


def _log_spaced(origin: float, width: float, direction: float) -> List[float]:
    points = []
    scale = width
    while 0.0 < scale < math.pi:
        points.append(origin + direction * scale)
        scale *= 10.0
    return points


def _shifted_offset(lam: float) -> Tuple[float, Callable[[float], float]]:
    """Centre c of the gap minimum and x ↦ cos(c + x) - λ, free of cancellation near its zero

    Limit integrals run over x = φ - c, so quadrature nodes next to the minimum are exact.
    """
    if abs(lam) < 1.0:
        center = math.acos(lam)
        return center, lambda x: -2.0 * math.sin(center + x / 2.0) * math.sin(x / 2.0)
    if lam <= -1.0:
        return 0.0, lambda x: 2.0 * math.cos(x / 2.0) ** 2 - (1.0 + lam)
    return 0.0, lambda x: (1.0 - lam) - 2.0 * math.sin(x / 2.0) ** 2


def _breakpoints(gamma: float, lam: float, center: float) -> List[float]:
    """Subdivision points on [-c, π - c]: log-spaced around the gap minimum and near a closing gap"""
    points = {-center, math.pi - center}
    if abs(lam) < 1.0:
        # Λ dips to ~|γ| sin c over a width ~|γ| around x = 0.
        points.add(0.0)
        for direction in (1.0, -1.0):
            points.update(_log_spaced(0.0, abs(gamma), direction))
    for edge, critical, direction in ((0.0, 1.0, 1.0), (math.pi, -1.0, -1.0)):
        distance = abs(lam - critical)
        if 0.0 < distance < 0.1:
            width = distance * min(1.0, abs(gamma)) if gamma else distance
            points.update(_log_spaced(edge - center, width, direction))
    return sorted(point for point in points if -center <= point <= math.pi - center)


def _near_singular(gamma: float, lam: float) -> bool:
    return (gamma == 0.0 and lam <= 1.0) or abs(abs(lam) - 1.0) < 1e-3


def _integrate_segments(integrand, breaks: Sequence[float], tolerance: float) -> Tuple[float, float]:
    """Adaptive quadrature over consecutive segments, summed in ascending order"""
    total = 0.0
    error = 0.0
    for lower, upper in zip(breaks[:-1], breaks[1:]):
        if upper <= lower:
            continue
        value, abserr = integrate.quad(integrand, lower, upper, epsabs=1e-13,
                                       epsrel=1e-12, limit=200)
        total += value
        error += abserr
    if not math.isfinite(total) or error > tolerance:
        raise QuadratureError(f"quadrature error {error:.3e} exceeds tolerance {tolerance:.1e}")
    logger.debug("quadrature over %d segments, error %.2e", len(breaks) - 1, error)
    return total, error


def _limit_integral(gamma: float, lam: float, integrand: Callable[[float, float], float]) -> float:
    """∫_0^π integrand(offset, pairing) dφ with offset = cos φ - λ and pairing = γ sin φ"""
    center, offset = _shifted_offset(lam)
    tolerance = QUAD_TOLERANCE_NEAR_SINGULAR if _near_singular(gamma, lam) else QUAD_TOLERANCE
    value, _ = _integrate_segments(
        lambda x: integrand(offset(x), gamma * math.sin(center + x)),
        _breakpoints(gamma, lam, center),
        tolerance,
    )
    return value


def _one_minus_cos_theta(offset: float, pairing: float) -> float:
    gap = math.hypot(offset, pairing)
    if gap <= GAPLESS_TOLERANCE:
        return 1.0 - _CROSSING_VALUE[CrossingLimit.GAMMA_ZERO]
    return 1.0 - offset / gap


def ground_phase_limit(gamma: float, lam: float) -> PhaseResult:
    """Thermodynamic-limit phase ∫_0^π (1 - cos θ_φ) dφ"""
    if not (math.isfinite(gamma) and math.isfinite(lam)):
        raise InvalidParameterError("gamma and lambda must be finite")
    return PhaseResult(
        beta_g=_limit_integral(gamma, lam, _one_minus_cos_theta),
        method=PhaseMethod.QUADRATURE,
        params={"gamma": gamma, "lambda": lam, "n_sites": None},
        scaled=True,
    )


def xx_limit_derivative(lam: float) -> float:
    """dβ_g/dλ of the γ→0⁺ limit: 2/sqrt(1-λ²) inside |λ| < 1, zero outside"""
    if abs(lam) == 1.0:
        raise SingularInputError("XX limit derivative diverges at |lambda| = 1")
    if abs(lam) > 1.0:
        return 0.0
    return 2.0 / math.sqrt((1.0 - lam) * (1.0 + lam))


def _derivative_integrand(offset: float, pairing: float) -> float:
    return pairing * pairing / math.hypot(offset, pairing) ** 3


def phase_derivative_limit(gamma: float, lam: float) -> float:
    """dβ_g/dλ in the thermodynamic limit; singular on the critical fields λ = ±1"""
    if not (math.isfinite(gamma) and math.isfinite(lam)):
        raise InvalidParameterError("gamma and lambda must be finite")
    if abs(gamma) < XX_GAMMA_CUTOFF:
        return xx_limit_derivative(lam)
    if abs(lam) == 1.0:
        raise SingularInputError(f"phase derivative diverges at lambda={lam} for gamma={gamma}")
    return _limit_integral(gamma, lam, _derivative_integrand)


def xx_limit_phase(lam: float) -> PhaseResult:
    """Closed form of the γ→0⁺ limit: 2π - 2 arccos λ for λ ≤ 1, 2π above"""
    if not math.isfinite(lam) or lam < 0.0:
        raise InvalidParameterError(f"xx_limit_phase needs lambda >= 0, got {lam}")
    beta = 2.0 * math.pi - 2.0 * math.acos(lam) if lam <= 1.0 else 2.0 * math.pi
    return PhaseResult(
        beta_g=beta,
        method=PhaseMethod.CLOSED_FORM,
        params={"gamma": 0.0, "lambda": lam, "n_sites": None},
        scaled=True,
    )
