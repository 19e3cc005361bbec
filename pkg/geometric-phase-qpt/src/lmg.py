"""
LMG model geometric phase
Holstein-Primakoff bosonisation around the semiclassical magnetisation, a Bogoliubov
rotation of the quadratic boson Hamiltonian, and the resulting phase of the rotated ground state
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from errors import FitError, InvalidParameterError, SingularInputError
from models import LMGParams, PhaseMethod, PhaseResult, ScalingFit
from scaling import fit_linear

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BogoliubovParams:
    """Quadratic-form coefficients and squeezing of the LMG boson vacuum"""
    theta_sc: float
    delta_b: float
    gamma_b: float
    tanh2x: float
    t: float


def semiclassical_angle(h: float) -> float:
    """Polar angle of the classical magnetisation: arccos(h) below h = 1, 0 above"""
    if not math.isfinite(h) or h < 0.0:
        raise InvalidParameterError(f"field h must be finite and >= 0, got {h}")
    return math.acos(h) if h < 1.0 else 0.0


def bogoliubov_params(params: LMGParams) -> BogoliubovParams:
    """Δ, Γ, tanh 2x = 2Γ/Δ and t = tanh² x at the semiclassical angle"""
    if params.field == 1.0:
        raise SingularInputError("h = 1 is the critical field (tanh 2x = -1)")
    theta = semiclassical_angle(params.field)
    cos_theta = min(params.field, 1.0)
    sin_sq = 1.0 - cos_theta ** 2
    gamma = params.gamma_lmg
    delta_b = sin_sq - (gamma + cos_theta ** 2) / 2.0 + params.field * cos_theta
    gamma_b = (gamma - cos_theta ** 2) / 4.0
    tanh2x = 2.0 * gamma_b / delta_b
    if abs(tanh2x) >= 1.0:
        raise SingularInputError(f"|tanh 2x| = {abs(tanh2x):.3g} >= 1 at h={params.field}")
    if tanh2x == 0.0:
        t = 0.0
    else:
        tanh_x = (1.0 - math.sqrt((1.0 - tanh2x) * (1.0 + tanh2x))) / tanh2x
        t = tanh_x * tanh_x
    return BogoliubovParams(theta_sc=theta, delta_b=delta_b, gamma_b=gamma_b,
                            tanh2x=tanh2x, t=t)


@lru_cache(maxsize=64)
def _exact_ratios(n_max: int) -> tuple:
    ratios = [Fraction(1)]
    for n in range(1, n_max + 1):
        ratios.append(ratios[-1] * Fraction(2 * n - 1, 2 * n))
    return tuple(ratios)


def double_factorial_ratio(n_max: int, exact: bool = False):
    """c_n = (2n-1)!!/(2n)!! for n = 0..n_max, from c_0 = 1 and c_n = c_{n-1}(2n-1)/(2n)"""
    if n_max < 0:
        raise InvalidParameterError("n_max must be >= 0")
    ratios = _exact_ratios(n_max)
    if exact:
        return list(ratios)
    return np.array([float(ratio) for ratio in ratios])


def _phase_from_t(t: float, n_max: int) -> float:
    if t == 0.0:
        return math.pi
    if t >= 1.0:
        raise SingularInputError("t = tanh² x reached 1; the boson vacuum is not normalisable")
    coefficients = double_factorial_ratio(n_max)
    n = np.arange(n_max + 1, dtype=float)
    # Both sums carry t^(n-1); one common factor t is taken out of numerator and denominator.
    powers = t ** n
    denominator = float(np.sum(coefficients * powers))
    numerator = float(np.sum(2.0 * n * coefficients * powers))
    return math.pi * (1.0 - numerator / denominator)


def lmg_phase(params: LMGParams) -> PhaseResult:
    """β_g = π[1 - Σ 2n c_n t^(n-1) / Σ c_n t^(n-1)], n = 0..⌊N/2⌋ (unwrapped)"""
    bogoliubov = bogoliubov_params(params)
    beta = _phase_from_t(bogoliubov.t, params.n_spins // 2)
    return PhaseResult(
        beta_g=beta,
        method=PhaseMethod.FINITE_SUM,
        params={"gamma": params.gamma_lmg, "h": params.field, "n_spins": params.n_spins},
        scaled=False,
    )


def lmg_phase_limit(params: LMGParams) -> PhaseResult:
    """N → ∞ value of the same series: π(1 - 2t)/(1 - t)"""
    t = bogoliubov_params(params).t
    return PhaseResult(
        beta_g=math.pi * (1.0 - 2.0 * t) / (1.0 - t),
        method=PhaseMethod.CLOSED_FORM,
        params={"gamma": params.gamma_lmg, "h": params.field, "n_spins": None},
        scaled=False,
    )


def lmg_size_scaling(gamma_lmg: float, h_near_1: float, size_list: Sequence[int]) -> ScalingFit:
    """Linear fit of β_g against N close to the critical field, approached from above"""
    if h_near_1 <= 1.0:
        raise InvalidParameterError(f"approach h = 1 from above, got h={h_near_1}")
    if len(size_list) < 4:
        raise FitError(f"need at least 4 sizes, got {len(size_list)}")
    points = [
        (float(size), lmg_phase(LMGParams(gamma_lmg=gamma_lmg, field=h_near_1, n_spins=size)).beta_g)
        for size in size_list
    ]
    fit = fit_linear(points)
    logger.debug("LMG slope %.4f per spin at h=%g gamma=%g (R²=%.5f)",
                 fit.slope, h_near_1, gamma_lmg, fit.r_squared)
    return fit
