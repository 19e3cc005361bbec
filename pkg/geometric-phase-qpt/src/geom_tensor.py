"""
Geometric quantities over a parameter manifold
Berry curvature from the spectral sum, the quantum geometric tensor from gauge-fixed
central differences, ground-state fidelity, and their closed forms for the XY chain
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from errors import DegenerateGroundStateError, GaugeFixingError, NumericalError
from models import ParitySector, XYParams
from xy_chain import mode_arrays

logger = logging.getLogger(__name__)

DEGENERACY_GAP = 1e-10
DEFAULT_STEP = 1e-5
RICHARDSON_LIMIT = 1e-6
MIN_OVERLAP = 1e-3

StateMap = Callable[[np.ndarray], np.ndarray]


def fix_global_phase(vector: np.ndarray) -> np.ndarray:
    """Rotate so the first component with modulus above 1e-12 is real and positive"""
    index = int(np.argmax(np.abs(vector) > 1e-12))
    value = vector[index]
    return vector * (np.conj(value) / abs(value))


@dataclass(frozen=True)
class SpectralModel:
    """A finite-dimensional Hamiltonian family η -> H(η), diagonalized densely"""
    hamiltonian: Callable[[np.ndarray], np.ndarray]
    dimension: Optional[int] = None

    @classmethod
    def from_hamiltonian(cls, hamiltonian: Callable[[np.ndarray], np.ndarray]) -> "SpectralModel":
        return cls(hamiltonian=hamiltonian)

    def spectrum(self, eta) -> Tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues and orthonormal eigenvectors (columns)"""
        matrix = np.asarray(self.hamiltonian(np.atleast_1d(np.asarray(eta, dtype=float))))
        return linalg.eigh(matrix)

    def ground_state(self, eta) -> np.ndarray:
        energies, vectors = self.spectrum(eta)
        if len(energies) > 1 and energies[1] - energies[0] < DEGENERACY_GAP:
            raise DegenerateGroundStateError(
                f"ground state degenerate at eta={np.atleast_1d(eta).tolist()} "
                f"(gap {energies[1] - energies[0]:.2e})"
            )
        return fix_global_phase(vectors[:, 0].astype(complex))


@dataclass(frozen=True)
class GeometricTensor:
    """Q_{μν} over the manifold coordinates; Re Q is the metric, Im Q the curvature form"""
    q: np.ndarray
    coordinates: Tuple[str, ...] = ()
    # largest |ΔQ| seen when the finite-difference step was halved; None for analytic tensors
    step_change: Optional[float] = None

    @property
    def converged(self) -> bool:
        return self.step_change is None or self.step_change <= RICHARDSON_LIMIT

    @property
    def metric(self) -> np.ndarray:
        return self.q.real

    @property
    def curvature(self) -> np.ndarray:
        return self.q.imag

    def check_invariants(self, tolerance: float = 1e-8) -> None:
        """Hermiticity, real nonnegative diagonal and antisymmetric imaginary part"""
        q = self.q
        if not np.allclose(q, q.conj().T, atol=tolerance, rtol=0.0):
            raise NumericalError("geometric tensor is not Hermitian")
        diagonal = np.diag(q)
        if np.any(np.abs(diagonal.imag) > tolerance) or np.any(diagonal.real < -1e-10):
            raise NumericalError("geometric tensor diagonal is not real and nonnegative")
        if not np.allclose(q.imag, -q.imag.T, atol=tolerance, rtol=0.0):
            raise NumericalError("imaginary part of the geometric tensor is not antisymmetric")


def berry_curvature_sum(model: SpectralModel, eta,
                        grad_h: Callable[[np.ndarray], Sequence[np.ndarray]]) -> np.ndarray:
    """V_{μν} = 2 Im Σ_{n≠g} ⟨g|∂_μH|n⟩⟨n|∂_νH|g⟩ / (E_n - E_g)²

    The factor 2 collects both orderings of the antisymmetric pair, so V = 2 Im Q.

    Raises:
        DegenerateGroundStateError: E_1 - E_0 below 1e-10
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    energies, vectors = model.spectrum(eta)
    gap = energies[1] - energies[0]
    if gap < DEGENERACY_GAP:
        raise DegenerateGroundStateError(f"energy levels cross at eta={eta.tolist()} (gap {gap:.2e})")
    ground = vectors[:, 0]
    # amplitudes[μ, n] = ⟨n|∂_μH|g⟩ for the excited states only
    amplitudes = np.array([vectors.conj().T @ (np.asarray(op) @ ground) for op in grad_h(eta)])[:, 1:]
    weights = 1.0 / (energies[1:] - energies[0]) ** 2
    products = np.einsum("mn,vn,n->mv", amplitudes.conj(), amplitudes, weights)
    return 2.0 * products.imag


def berry_curvature_from_qgt(tensor: GeometricTensor) -> np.ndarray:
    """Curvature two-form V = 2 Im Q, same orientation as berry_curvature_sum"""
    return 2.0 * tensor.q.imag


def _aligned(center: np.ndarray, neighbour: np.ndarray, eta: np.ndarray) -> np.ndarray:
    overlap = np.vdot(center, neighbour)
    if abs(overlap) < MIN_OVERLAP:
        raise GaugeFixingError(
            f"overlap {abs(overlap):.2e} with the central state at eta={eta.tolist()}; reduce the step"
        )
    return neighbour * (np.conj(overlap) / abs(overlap))


def _normalized(vector) -> np.ndarray:
    vector = np.asarray(vector, dtype=complex)
    return vector / np.linalg.norm(vector)


def _qgt_at_step(state_map: StateMap, eta: np.ndarray, step: float) -> np.ndarray:
    center = _normalized(state_map(eta))
    derivatives = []
    for axis in range(len(eta)):
        shift = np.zeros_like(eta)
        shift[axis] = step
        plus = _aligned(center, _normalized(state_map(eta + shift)), eta)
        minus = _aligned(center, _normalized(state_map(eta - shift)), eta)
        derivatives.append((plus - minus) / (2.0 * step))
    d = np.array(derivatives)
    connection = d.conj() @ center
    return d.conj() @ d.T - np.outer(connection, connection.conj())


def qgt_numeric(state_map: StateMap, eta, step: float = DEFAULT_STEP,
                coordinates: Tuple[str, ...] = ()) -> GeometricTensor:
    """Q_{μν} = ⟨∂_μΨ|∂_νΨ⟩ - ⟨∂_μΨ|Ψ⟩⟨Ψ|∂_νΨ⟩ by central differences

    Neighbouring states are rotated so their overlap with the central state is real and
    positive; the result is then independent of the phase convention of state_map.
    A second pass at step/2 checks convergence; the change is kept in step_change.
    """
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    q = _qgt_at_step(state_map, eta, step)
    refined = _qgt_at_step(state_map, eta, step / 2.0)
    change = float(np.max(np.abs(q - refined)))
    if change > RICHARDSON_LIMIT:
        logger.warning("QGT moved by %.2e when halving the step at eta=%s", change, eta.tolist())
    return GeometricTensor(q=q, coordinates=coordinates, step_change=change)


def fidelity(state_map: StateMap, eta1, eta2) -> float:
    """F = |⟨Ψ(η₁)|Ψ(η₂)⟩|"""
    first = _normalized(state_map(np.atleast_1d(np.asarray(eta1, dtype=float))))
    second = _normalized(state_map(np.atleast_1d(np.asarray(eta2, dtype=float))))
    return float(min(1.0, abs(np.vdot(first, second))))


def xy_mode_qgt(params: XYParams, sector: ParitySector = ParitySector.EVEN) -> GeometricTensor:
    """Closed-form QGT of the XY ground state over (λ, φ)

    Re Q_λλ = Σ (∂_λθ_k)²/4, Re Q_φφ = Σ sin²θ_k, Im Q_λφ = Σ γ² sin²φ_k / (2Λ_k³)
    """
    modes = mode_arrays(params.gamma, params.lam, params.n_sites, sector)
    if modes.gapless.any():
        raise DegenerateGroundStateError(f"gapless mode at gamma={params.gamma} lambda={params.lam}")
    pairing = params.gamma * np.sin(modes.phi)
    lambda_lambda = float(np.sum((pairing / modes.lambda_k ** 2) ** 2) / 4.0)
    phi_phi = float(np.sum((pairing / modes.lambda_k) ** 2))
    mixed = float(np.sum(pairing ** 2 / (2.0 * modes.lambda_k ** 3)))
    q = np.array([[lambda_lambda, 1j * mixed], [-1j * mixed, phi_phi]], dtype=complex)
    return GeometricTensor(q=q, coordinates=("lambda", "phi"))


def xy_fidelity(gamma: float, lam1: float, lam2: float, n_sites: int,
                sector: ParitySector = ParitySector.EVEN) -> float:
    """Π_k |cos((θ_k - θ'_k)/2)| over the paired modes of one parity sector"""
    first = np.arccos(mode_arrays(gamma, lam1, n_sites, sector).cos_theta)
    second = np.arccos(mode_arrays(gamma, lam2, n_sites, sector).cos_theta)
    return float(np.prod(np.abs(np.cos((first - second) / 2.0))))
