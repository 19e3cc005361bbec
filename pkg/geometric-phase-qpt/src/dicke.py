"""
Dicke model geometric phase in the Born-Oppenheimer picture
The qubits follow the oscillator coordinate adiabatically; the oscillator then moves in the
potential (ω/2)(q² - N sqrt(D² + L²q²/N)), solved on a uniform grid by finite differences
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from errors import GridTooSmallError, InvalidParameterError, SingularInputError
from models import DickeParams, GridSpec, PhaseMethod, PhaseResult

logger = logging.getLogger(__name__)

EDGE_AMPLITUDE_LIMIT = 1e-8
DEFAULT_SPACING = 0.004
MAX_BOX_DOUBLINGS = 4


@dataclass(frozen=True)
class OscillatorGroundState:
    """Lowest eigenpair of the adiabatic oscillator Hamiltonian on a uniform grid"""
    grid: np.ndarray
    amplitudes: np.ndarray
    energy: float

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def norm(self) -> float:
        return float(np.sum(self.amplitudes ** 2) * self.spacing)


def field_magnitude(q, params: DickeParams) -> np.ndarray:
    """|B(q)| = sqrt(D² + L² q²/N), the effective field seen by each qubit"""
    q = np.asarray(q, dtype=float)
    return np.sqrt(params.d_value ** 2 + params.l_value ** 2 * q ** 2 / params.n_qubits)


def adiabatic_potential(q, params: DickeParams):
    """(ω/2)(q² - N |B(q)|); even in q"""
    value = 0.5 * params.omega * (np.asarray(q, dtype=float) ** 2
                                  - params.n_qubits * field_magnitude(q, params))
    return float(value) if np.ndim(value) == 0 else value


def mean_field_minimum(params: DickeParams) -> float:
    """q² at the minimum of the adiabatic potential: N(L⁴/4 - D²)/L² above α = 1, else 0"""
    d_value, l_value = params.d_value, params.l_value
    if params.alpha <= 1.0:
        return 0.0
    return params.n_qubits * (l_value ** 4 / 4.0 - d_value ** 2) / l_value ** 2


def default_box(params: DickeParams) -> float:
    """Half-width of the q box: room for the displaced minima plus Gaussian tails"""
    q_min_sq = mean_field_minimum(params)
    return max(8.0, 2.0 * math.sqrt(q_min_sq) + 8.0)


def _grid_points(q_max: float, grid_spec: Optional[GridSpec]) -> int:
    minimum = grid_spec.points if grid_spec is not None else 2001
    return max(minimum, int(math.ceil(2.0 * q_max / DEFAULT_SPACING)) + 1)


def solve_ground_oscillator(params: DickeParams,
                            grid_spec: Optional[GridSpec] = None) -> OscillatorGroundState:
    """Lowest eigenpair of (ω/2)(-d²/dq² + q² - N|B(q)|) with second-order differences

    Args:
        params: Dicke parameters
        grid_spec: explicit grid; None picks the default box and spacing

    Returns:
        OscillatorGroundState with amplitudes normalised to Σ|φ|² Δq = 1

    Raises:
        GridTooSmallError: the amplitude at a box edge exceeds 1e-8
    """
    if grid_spec is not None and grid_spec.q_max is not None:
        q_max = grid_spec.q_max
        points = grid_spec.points
    else:
        q_max = default_box(params)
        points = _grid_points(q_max, grid_spec)
    grid = np.linspace(-q_max, q_max, points)
    step = grid[1] - grid[0]

    half_omega = 0.5 * params.omega
    diagonal = half_omega * (2.0 / step ** 2) + adiabatic_potential(grid, params)
    off_diagonal = np.full(points - 1, -half_omega / step ** 2)
    energies, vectors = linalg.eigh_tridiagonal(diagonal, off_diagonal,
                                                select="i", select_range=(0, 0))
    amplitudes = vectors[:, 0] / math.sqrt(step)
    if amplitudes[np.argmax(np.abs(amplitudes))] < 0:
        amplitudes = -amplitudes

    edge = float(max(abs(amplitudes[0]), abs(amplitudes[-1])))
    if edge > EDGE_AMPLITUDE_LIMIT:
        raise GridTooSmallError(
            f"edge amplitude {edge:.2e} exceeds {EDGE_AMPLITUDE_LIMIT:.0e} with q_max={q_max:g}",
            edge_amplitude=edge,
        )
    return OscillatorGroundState(grid=grid, amplitudes=amplitudes, energy=float(energies[0]))


def _solve_with_enlargement(params: DickeParams) -> OscillatorGroundState:
    q_max = default_box(params)
    for attempt in range(MAX_BOX_DOUBLINGS + 1):
        spec = GridSpec(points=_grid_points(q_max, None), q_max=q_max)
        try:
            return solve_ground_oscillator(params, spec)
        except GridTooSmallError:
            if attempt == MAX_BOX_DOUBLINGS:
                raise
            logger.debug("q box %.1f too small at alpha=%.3f N=%d, doubling",
                         q_max, params.alpha, params.n_qubits)
            q_max *= 2.0
    raise AssertionError("unreachable")


def sigma_x_mean(params: DickeParams, state: OscillatorGroundState) -> float:
    """⟨Jx⟩/N = -∫ |φ(q)|² D/|B(q)| dq"""
    weights = state.amplitudes ** 2 * state.spacing
    return float(-np.sum(weights * params.d_value / field_magnitude(state.grid, params)))


def dicke_phase_finite(params: DickeParams,
                       grid_spec: Optional[GridSpec] = None) -> PhaseResult:
    """β_g = Nπ(1 + ⟨Jx⟩/N) from the Born-Oppenheimer ground state"""
    if grid_spec is None:
        state = _solve_with_enlargement(params)
    else:
        state = solve_ground_oscillator(params, grid_spec)
    beta = params.n_qubits * math.pi * (1.0 + sigma_x_mean(params, state))
    return PhaseResult(
        beta_g=max(beta, 0.0),
        method=PhaseMethod.GRID_EIGENSOLVER,
        params={"D": params.d_value, "alpha": params.alpha, "n_qubits": params.n_qubits},
        scaled=False,
    )


def dicke_phase_limit(alpha: float) -> float:
    """β_g/N for N → ∞: 0 up to α = 1, π(1 - 1/α) beyond"""
    if not math.isfinite(alpha) or alpha < 0.0:
        raise InvalidParameterError(f"alpha must be finite and >= 0, got {alpha}")
    if alpha <= 1.0:
        return 0.0
    return math.pi * (1.0 - 1.0 / alpha)


def dicke_phase_derivative_limit(alpha: float) -> float:
    """d(β_g/N)/dα for N → ∞; the cusp at α = 1 has no derivative"""
    if not math.isfinite(alpha) or alpha < 0.0:
        raise InvalidParameterError(f"alpha must be finite and >= 0, got {alpha}")
    if alpha == 1.0:
        raise SingularInputError("Dicke phase has a cusp at alpha = 1")
    if alpha < 1.0:
        return 0.0
    return math.pi / alpha ** 2

