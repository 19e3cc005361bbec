"""
Oracle suite: analytic results against brute-force references
"""

import logging
import math
from typing import Callable, List

import numpy as np

from dicke import dicke_phase_limit
from geom_tensor import (SpectralModel, berry_curvature_from_qgt, berry_curvature_sum, fidelity,
                         qgt_numeric, xy_fidelity, xy_mode_qgt)
from lmg import semiclassical_angle
from models import CheckResult, ParitySector, ProbeParams, XYParams
from oracle import (discrete_berry_phase, dicke_meanfield_oracle, lmg_meanfield_angle, magnetization,
                    parity_corrected_reference, per_mode_wilson_loop, spin_chain_ed_ground,
                    wilson_loop_phase, wrap_phase, xy_hamiltonian)
from probe_qubit import probe_derivative, probe_phase
from xy_chain import ground_phase_finite, phase_derivative_finite

logger = logging.getLogger(__name__)

ED_SIZES = (3, 5, 7, 9)
ED_FIELDS = (0.3, 2.0)
FD_STEP = 1e-5


def _result(name: str, discrepancy: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = bool(np.isfinite(discrepancy) and discrepancy <= tolerance)
    return CheckResult(name=name, discrepancy=float(discrepancy), tolerance=tolerance,
                       passed=passed, detail=detail)


def check_per_mode_loops(rng: np.random.Generator, samples: int = 100) -> CheckResult:
    worst = 0.0
    for cos_theta in rng.uniform(-1.0, 1.0, samples):
        loop = per_mode_wilson_loop(float(cos_theta), 10_000)
        worst = max(worst, abs(wrap_phase(loop - math.pi * (1.0 - cos_theta))))
    return _result("per-mode-wilson-loop", worst, 1e-6, f"{samples} random angles")


def check_loop_gauge_invariance(rng: np.random.Generator) -> CheckResult:
    theta = float(rng.uniform(0.2, 2.9))
    phi = np.pi * np.arange(400) / 400
    states = [np.array([math.cos(theta / 2.0), -1j * np.exp(2j * p) * math.sin(theta / 2.0)]) for p in phi]
    rotated = [state * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)) for state in states]
    difference = abs(wrap_phase(wilson_loop_phase(states) - wilson_loop_phase(rotated)))
    return _result("wilson-gauge-invariance", difference, 1e-10)


def check_ed_berry_phase() -> CheckResult:
    worst = 0.0
    for n_sites in ED_SIZES:
        for lam in ED_FIELDS:
            params = XYParams(gamma=1.0, lam=lam, n_sites=n_sites)
            ground = spin_chain_ed_ground(params)
            measured = discrete_berry_phase(params)
            reference = parity_corrected_reference(params, ground.up_parity)
            worst = max(worst, abs(wrap_phase(measured - reference)))
    return _result("ed-berry-phase", worst, 2.0 * math.pi / max(ED_SIZES),
                   f"gamma=1, lambda in {ED_FIELDS}, N in {ED_SIZES}")


def check_ed_energy_invariance() -> CheckResult:
    params = XYParams(gamma=0.7, lam=0.4, n_sites=5)
    shift = abs(spin_chain_ed_ground(params, 0.0).energy - spin_chain_ed_ground(params, math.pi / 2).energy)
    return _result("ed-energy-phi-invariance", shift, 1e-10)


def check_xy_derivative() -> CheckResult:
    worst = 0.0
    for lam in (0.5, 0.9, 1.3):
        def phase(x: float) -> float:
            return ground_phase_finite(XYParams(gamma=1.0, lam=x, n_sites=101)).beta_g
        numeric = (phase(lam + FD_STEP) - phase(lam - FD_STEP)) / (2.0 * FD_STEP)
        analytic = phase_derivative_finite(XYParams(gamma=1.0, lam=lam, n_sites=101))
        worst = max(worst, abs(analytic - numeric) / abs(numeric))
    return _result("derivative-vs-finite-difference", worst, 1e-5, "XY chain, gamma=1, N=101")


def check_probe_derivative() -> CheckResult:
    worst = 0.0
    for lam in (0.6, 0.95, 1.2):
        def phase(x: float) -> float:
            return probe_phase(ProbeParams(mu=0.1, nu=2.0, eta=0.5, gamma=1.0, lam=x, n_sites=51)).beta_g
        numeric = (phase(lam + FD_STEP) - phase(lam - FD_STEP)) / (2.0 * FD_STEP)
        analytic = probe_derivative(ProbeParams(mu=0.1, nu=2.0, eta=0.5, gamma=1.0, lam=lam, n_sites=51))
        worst = max(worst, abs(analytic - numeric) / abs(numeric))
    return _result("probe-derivative-vs-finite-difference", worst, 1e-5, "mu=0.1 nu=2 eta=0.5, N=51")


def _ed_state_map(gamma: float, n_sites: int, sector: ParitySector) -> Callable[[np.ndarray], np.ndarray]:
    def state_map(eta: np.ndarray) -> np.ndarray:
        params = XYParams(gamma=gamma, lam=float(eta[0]), n_sites=n_sites)
        return spin_chain_ed_ground(params, float(eta[1]) if len(eta) > 1 else 0.0, sector).vector
    return state_map


def check_fidelity_product() -> CheckResult:
    worst = 0.0
    for n_sites in (5, 7):
        state_map = _ed_state_map(1.0, n_sites, ParitySector.ODD)
        exact = fidelity(state_map, [0.3], [0.35])
        product = xy_fidelity(1.0, 0.3, 0.35, n_sites, ParitySector.ODD)
        worst = max(worst, abs(exact - product))
    return _result("fidelity-mode-product", worst, 1e-10, "gamma=1, lambda 0.3 -> 0.35, odd sector")


def xy_spectral_model(gamma: float, n_sites: int) -> SpectralModel:
    """H(λ, φ) of a short XY ring as a dense family"""
    return SpectralModel.from_hamiltonian(
        lambda eta: xy_hamiltonian(XYParams(gamma=gamma, lam=float(eta[0]), n_sites=n_sites), float(eta[1]))
    )


def xy_hamiltonian_gradient(gamma: float, n_sites: int) -> Callable[[np.ndarray], List[np.ndarray]]:
    """∂_λH = -Σσ^z and ∂_φH_φ = (i/2)[Σσ^z, H_φ]"""
    z_total = np.diag(magnetization(n_sites).astype(complex))

    def gradient(eta: np.ndarray) -> List[np.ndarray]:
        rotated = xy_hamiltonian(XYParams(gamma=gamma, lam=float(eta[0]), n_sites=n_sites), float(eta[1]))
        return [-z_total, 0.5j * (z_total @ rotated - rotated @ z_total)]
    return gradient


def check_curvature_consistency() -> CheckResult:
    model = xy_spectral_model(1.0, 3)
    eta = np.array([0.5, 0.3])
    spectral = berry_curvature_sum(model, eta, xy_hamiltonian_gradient(1.0, 3))
    tensor = qgt_numeric(model.ground_state, eta)
    difference = float(np.max(np.abs(spectral - berry_curvature_from_qgt(tensor))))
    return _result("curvature-vs-qgt", difference, 1e-5, "XY ring N=3, gamma=1, lambda=0.5")


def check_mode_qgt() -> CheckResult:
    params = XYParams(gamma=1.0, lam=0.3, n_sites=5)
    tensor = qgt_numeric(_ed_state_map(1.0, 5, ParitySector.ODD), [0.3, 0.2])
    analytic = xy_mode_qgt(params, ParitySector.ODD)
    difference = abs(tensor.q[0, 1].imag - analytic.q[0, 1].imag)
    return _result("mode-qgt-vs-ed", difference, 1e-5, "Im Q_lambda_phi, N=5, odd sector")


def check_dicke_meanfield() -> CheckResult:
    worst = 0.0
    d_value = 10.0
    for alpha in (0.5, 1.5, 2.0, 3.0):
        _, sigma_x = dicke_meanfield_oracle(d_value, math.sqrt(2.0 * d_value * alpha))
        worst = max(worst, abs(math.pi * (1.0 + sigma_x) - dicke_phase_limit(alpha)))
    return _result("dicke-meanfield", worst, 1e-8, "D=10")


def check_lmg_meanfield() -> CheckResult:
    worst = max(abs(lmg_meanfield_angle(h) - semiclassical_angle(h)) for h in (0.2, 0.5, 0.8, 1.5))
    return _result("lmg-meanfield-angle", worst, 1e-6)


def run_oracle_suite(seed: int = 7) -> List[CheckResult]:
    """Every analytic-versus-oracle comparison, in a fixed order"""
    rng = np.random.default_rng(seed)
    checks = [
        lambda: check_per_mode_loops(rng),
        lambda: check_loop_gauge_invariance(rng),
        check_ed_berry_phase,
        check_ed_energy_invariance,
        check_xy_derivative,
        check_probe_derivative,
        check_fidelity_product,
        check_curvature_consistency,
        check_mode_qgt,
        check_dicke_meanfield,
        check_lmg_meanfield,
    ]
    results = []
    for check in checks:
        result = check()
        logger.debug("%s: %.3e (tol %.1e)", result.name, result.discrepancy, result.tolerance)
        results.append(result)
    return results


def format_report(results: List[CheckResult]) -> str:
    lines = ["=" * 60, "ORACLE CHECKS", "=" * 60]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status}  {result.name:<38} {result.discrepancy:.2e} / {result.tolerance:.1e}")
    failed = sum(not result.passed for result in results)
    lines.append("=" * 60)
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    return "\n".join(lines)
