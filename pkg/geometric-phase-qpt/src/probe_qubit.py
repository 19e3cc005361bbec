"""
Probe qubit coupled to an XY ring
The ring ground state conditioned on the probe's lower branch shifts the field seen by
every mode; the probe's own geometric phase then tracks the ring's criticality through f
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors import GaplessModeError, InvalidParameterError, SingularInputError
from models import PhaseMethod, PhaseResult, ProbeBranch, ProbeParams
from xy_chain import GAPLESS_TOLERANCE, ground_phase_limit, mode_momenta, phase_derivative_limit

logger = logging.getLogger(__name__)

_BRANCH_SIGN = {ProbeBranch.G: 1.0, ProbeBranch.E: -1.0}


@dataclass(frozen=True)
class BranchAngles:
    """Mode angles of the ring state attached to one probe branch"""
    branch: ProbeBranch
    phi: np.ndarray
    epsilon: np.ndarray
    lambda_k: np.ndarray
    cos_theta: np.ndarray
    gapless: np.ndarray


def branch_angles(gamma: float, lam: float, n_sites: int, delta_shift: float,
                  branch: ProbeBranch = ProbeBranch.G) -> BranchAngles:
    """cos θ_k = ε_k/Λ_k with ε_k = λ - cos φ_k ± δ (+ on the g branch)"""
    if n_sites < 3 or n_sites % 2 == 0:
        raise InvalidParameterError(f"n_sites must be odd and >= 3, got {n_sites}")
    phi = mode_momenta(n_sites)
    epsilon = (lam - 1.0) + 2.0 * np.sin(phi / 2.0) ** 2 + _BRANCH_SIGN[branch] * delta_shift
    lambda_k = np.hypot(epsilon, gamma * np.sin(phi))
    gapless = lambda_k <= GAPLESS_TOLERANCE
    cos_theta = np.where(gapless, 0.0, epsilon / np.where(gapless, 1.0, lambda_k))
    return BranchAngles(branch=branch, phi=phi, epsilon=epsilon, lambda_k=lambda_k,
                        cos_theta=np.clip(cos_theta, -1.0, 1.0), gapless=gapless)


def f_xx_limit(lam: float) -> float:
    """f for γ = 0 and N → ∞: 1/2 - arccos(λ)/π inside |λ| ≤ 1, ±1/2 outside"""
    if lam >= 1.0:
        return 0.5
    if lam <= -1.0:
        return -0.5
    return 0.5 - math.acos(lam) / math.pi


def f_function(lam: float, gamma: float, n_sites: Optional[int],
               delta_shift: float = 0.0) -> float:
    """f = (1/N) Σ cos θ_k^(g); n_sites=None gives the integral, where δ drops out"""
    if not (math.isfinite(lam) and math.isfinite(gamma) and math.isfinite(delta_shift)):
        raise InvalidParameterError("lambda, gamma and delta_shift must be finite")
    if n_sites is None:
        # The probe angle is minus the chain angle, so ∫ cos θ^(g) = β_lim - π.
        return (ground_phase_limit(gamma, lam).beta_g - math.pi) / (2.0 * math.pi)
    angles = branch_angles(gamma, lam, n_sites, delta_shift)
    if angles.gapless.any():
        logger.warning("%d gapless ring mode(s) at gamma=%g lambda=%g N=%d",
                       int(np.count_nonzero(angles.gapless)), gamma, lam, n_sites)
    return float(np.sum(angles.cos_theta) / n_sites)


def f_derivative(lam: float, gamma: float, n_sites: Optional[int],
                 delta_shift: float = 0.0) -> float:
    """df/dλ = (1/N) Σ γ² sin² φ_k / Λ_k³, or the integral over [0, π] divided by 2π"""
    if n_sites is None:
        return phase_derivative_limit(gamma, lam) / (2.0 * math.pi)
    angles = branch_angles(gamma, lam, n_sites, delta_shift)
    if angles.gapless.any():
        count = int(np.count_nonzero(angles.gapless))
        raise GaplessModeError(f"{count} gapless ring mode(s) at gamma={gamma} lambda={lam}",
                               gapless_modes=count)
    terms = (gamma * np.sin(angles.phi)) ** 2 / angles.lambda_k ** 3
    return float(np.sum(terms) / n_sites)


def _phase_from_f(mu: float, nu: float, eta: float, f_value: float) -> float:
    x = mu + 4.0 * eta * f_value
    radius = math.hypot(x, nu)
    if radius == 0.0:
        raise SingularInputError("probe qubit is degenerate (mu + 4 eta f = 0 and nu = 0)")
    return math.pi * (1.0 + x / radius)


def _result_params(params: ProbeParams) -> dict:
    return {"mu": params.mu, "nu": params.nu, "eta": params.eta, "gamma": params.gamma,
            "lambda": params.lam, "n_sites": params.n_sites}


def probe_phase(params: ProbeParams) -> PhaseResult:
    """β_g = π(1 + (μ + 4ηf)/sqrt((μ + 4ηf)² + ν²))"""
    f_value = f_function(params.lam, params.gamma, params.n_sites, params.delta_shift)
    return PhaseResult(
        beta_g=_phase_from_f(params.mu, params.nu, params.eta, f_value),
        method=PhaseMethod.FINITE_SUM if params.n_sites is not None else PhaseMethod.QUADRATURE,
        params=_result_params(params),
    )


def probe_phase_xx_limit(mu: float, nu: float, eta: float, lam: float) -> PhaseResult:
    """Closed form for an XX ring (γ = 0) in the thermodynamic limit"""
    if not math.isfinite(lam) or lam < 0.0:
        raise InvalidParameterError(f"probe_phase_xx_limit needs lambda >= 0, got {lam}")
    if mu == 0.0 and nu == 0.0:
        raise InvalidParameterError("probe qubit needs mu != 0 or nu != 0")
    return PhaseResult(
        beta_g=_phase_from_f(mu, nu, eta, f_xx_limit(lam)),
        method=PhaseMethod.CLOSED_FORM,
        params={"mu": mu, "nu": nu, "eta": eta, "gamma": 0.0, "lambda": lam, "n_sites": None},
    )


def probe_derivative(params: ProbeParams) -> float:
    """dβ_g/dλ = 4πη ν² f'(λ) / ((μ + 4ηf)² + ν²)^(3/2)"""
    f_value = f_function(params.lam, params.gamma, params.n_sites, params.delta_shift)
    slope = f_derivative(params.lam, params.gamma, params.n_sites, params.delta_shift)
    x = params.mu + 4.0 * params.eta * f_value
    radius_sq = x * x + params.nu * params.nu
    if radius_sq == 0.0:
        raise SingularInputError("probe qubit is degenerate (mu + 4 eta f = 0 and nu = 0)")
    return 4.0 * math.pi * params.eta * params.nu ** 2 * slope / radius_sq ** 1.5
