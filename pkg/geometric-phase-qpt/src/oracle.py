"""
Brute-force validators
Discrete Wilson loops for the per-mode two-level states, dense exact diagonalization of
short XY rings with their discrete Berry phase, and mean-field minimizations for the
collective models
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize, sparse

from errors import InvalidParameterError, NumericalError
from geom_tensor import fix_global_phase
from models import ParitySector, XYParams
from xy_chain import ground_phase_finite

logger = logging.getLogger(__name__)

MAX_ED_SITES = 11
MIN_LOOP_STEPS = 100
SECTOR_TIE = 1e-10

_PAULI_X = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_PAULI_Y = sparse.csr_matrix(np.array([[0.0, -1.0j], [1.0j, 0.0]]))
_PAULI_Z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))


def wrap_phase(value: float) -> float:
    """Map an angle into (-π, π]"""
    return math.pi - (math.pi - value) % (2.0 * math.pi)


def wilson_loop_phase(states: Sequence[np.ndarray]) -> float:
    """arg Π_j ⟨ψ_j|ψ_{j+1}⟩ around the closed loop (ψ_last+1 = ψ_0), wrapped to (-π, π]"""
    if len(states) < 2:
        raise InvalidParameterError("a loop needs at least two states")
    total = 0.0
    for current, following in zip(states, list(states[1:]) + [states[0]]):
        overlap = np.vdot(current, following)
        if abs(overlap) < 1e-12:
            raise NumericalError("consecutive loop states are orthogonal; refine the loop")
        total += math.atan2(overlap.imag, overlap.real)
    return wrap_phase(total)


@dataclass(frozen=True)
class WilsonLoop:
    """Ordered states around a closed loop and their discrete Berry phase"""
    states: Tuple[np.ndarray, ...]
    phase: float

    @classmethod
    def from_states(cls, states: Sequence[np.ndarray]) -> "WilsonLoop":
        return cls(states=tuple(states), phase=wilson_loop_phase(states))


def per_mode_wilson_loop(cos_theta_k: float, steps: int = 10_000) -> float:
    """Loop phase of cos(θ/2)|0⟩ - i e^{2iφ} sin(θ/2)|1⟩ for φ over [0, π); equals π(1 - cos θ) mod 2π"""
    if steps < MIN_LOOP_STEPS:
        raise InvalidParameterError(f"per-mode loop needs at least {MIN_LOOP_STEPS} steps, got {steps}")
    if not -1.0 <= cos_theta_k <= 1.0:
        raise InvalidParameterError(f"cos_theta_k must lie in [-1, 1], got {cos_theta_k}")
    theta = math.acos(cos_theta_k)
    phi = np.pi * np.arange(steps) / steps
    states = np.column_stack([
        np.full(steps, math.cos(theta / 2.0), dtype=complex),
        -1j * np.exp(2j * phi) * math.sin(theta / 2.0),
    ])
    return wilson_loop_phase(list(states))


def _site_operator(pauli: sparse.csr_matrix, site: int, n_sites: int) -> sparse.csr_matrix:
    operator = sparse.identity(1, format="csr")
    for position in range(n_sites):
        factor = pauli if position == site else sparse.identity(2, format="csr")
        operator = sparse.kron(operator, factor, format="csr")
    return operator


def magnetization(n_sites: int) -> np.ndarray:
    """Σ_j σ^z_j on the computational basis (bit 1 = spin down)"""
    downs = np.array([bin(index).count("1") for index in range(2 ** n_sites)])
    return n_sites - 2 * downs


def _check_size(n_sites: int) -> None:
    if n_sites > MAX_ED_SITES:
        raise InvalidParameterError(
            f"dense diagonalization limited to N <= {MAX_ED_SITES} (2^N = {2 ** n_sites} requested)"
        )


def xy_hamiltonian(params: XYParams, phi: float = 0.0) -> np.ndarray:
    """Dense H_φ = U_φ† H U_φ of the periodic XY ring

    H = -Σ_j [(1+γ)/2 σ^x_j σ^x_{j+1} + (1-γ)/2 σ^y_j σ^y_{j+1} + λ σ^z_j]
    """
    n_sites = params.n_sites
    _check_size(n_sites)
    dimension = 2 ** n_sites
    hamiltonian = sparse.csr_matrix((dimension, dimension), dtype=complex)
    for site in range(n_sites):
        following = (site + 1) % n_sites
        hamiltonian = hamiltonian - 0.5 * (1.0 + params.gamma) * (
            _site_operator(_PAULI_X, site, n_sites) @ _site_operator(_PAULI_X, following, n_sites))
        hamiltonian = hamiltonian - 0.5 * (1.0 - params.gamma) * (
            _site_operator(_PAULI_Y, site, n_sites) @ _site_operator(_PAULI_Y, following, n_sites))
        hamiltonian = hamiltonian - params.lam * _site_operator(_PAULI_Z, site, n_sites)
    dense = hamiltonian.toarray()
    if phi == 0.0:
        return dense
    rotation = np.exp(0.5j * phi * magnetization(n_sites))
    return rotation[:, None] * dense * rotation.conj()[None, :]


@dataclass(frozen=True)
class EDGroundState:
    """Ground state of one parity sector of the dense XY Hamiltonian"""
    vector: np.ndarray
    energy: float
    sector: ParitySector
    gap: float

    @property
    def up_parity(self) -> int:
        return 0 if self.sector == ParitySector.EVEN else 1


def _sector_indices(n_sites: int, sector: ParitySector) -> np.ndarray:
    ups = (n_sites + magnetization(n_sites)) // 2
    wanted = 0 if sector == ParitySector.EVEN else 1
    return np.flatnonzero(ups % 2 == wanted)


def spin_chain_ed_ground(params: XYParams, phi: float = 0.0,
                         sector: Optional[ParitySector] = None) -> EDGroundState:
    """Parity-resolved dense diagonalization of H_φ

    With sector=None the lower of the two sector ground states is returned; sectors
    within 1e-10 of each other resolve to the even one.

    Raises:
        InvalidParameterError: N > 11
    """
    _check_size(params.n_sites)
    hamiltonian = xy_hamiltonian(params, phi)
    candidates = {}
    all_energies: List[float] = []
    for candidate in (ParitySector.EVEN, ParitySector.ODD):
        indices = _sector_indices(params.n_sites, candidate)
        energies, vectors = linalg.eigh(hamiltonian[np.ix_(indices, indices)])
        vector = np.zeros(2 ** params.n_sites, dtype=complex)
        vector[indices] = vectors[:, 0]
        candidates[candidate] = (float(energies[0]), vector)
        all_energies.extend(energies[:2].tolist())

    if sector is None:
        even_energy, odd_energy = candidates[ParitySector.EVEN][0], candidates[ParitySector.ODD][0]
        sector = ParitySector.ODD if odd_energy < even_energy - SECTOR_TIE else ParitySector.EVEN
    energy, vector = candidates[sector]
    lowest = sorted(all_energies)
    return EDGroundState(vector=fix_global_phase(vector), energy=energy, sector=sector,
                         gap=float(lowest[1] - lowest[0]))


def discrete_berry_phase(params: XYParams, phi_steps: int = 4096, method: str = "rotate") -> float:
    """Raw Wilson-loop phase of the ED ground state as φ runs over [0, π)

    method="rotate" applies U_φ to the φ = 0 ground state; method="diagonalize"
    solves H_φ afresh at every grid point in the same parity sector.
    """
    if phi_steps < MIN_LOOP_STEPS:
        raise InvalidParameterError(f"phi_steps must be >= {MIN_LOOP_STEPS}, got {phi_steps}")
    ground = spin_chain_ed_ground(params)
    grid = np.pi * np.arange(phi_steps) / phi_steps
    if method == "rotate":
        m = magnetization(params.n_sites)
        states = [np.exp(0.5j * phi * m) * ground.vector for phi in grid]
    elif method == "diagonalize":
        states = [ground.vector] + [spin_chain_ed_ground(params, phi, ground.sector).vector
                                    for phi in grid[1:]]
    else:
        raise InvalidParameterError(f"unknown method '{method}', use 'rotate' or 'diagonalize'")
    phase = wilson_loop_phase(states)
    logger.debug("ED loop phase %.6f at gamma=%g lambda=%g N=%d (%s sector)",
                 phase, params.gamma, params.lam, params.n_sites, ground.sector.value)
    return phase


def parity_corrected_reference(params: XYParams, up_parity: int) -> float:
    """Raw analytic sum π Σ(1 - cos θ_k) shifted by π(n_0 - P_up), wrapped to (-π, π]

    n_0 is the occupation of the k = 0 fermion mode (1 above λ = 1) and P_up the up-spin
    parity of the ring state the loop is taken in.
    """
    raw = ground_phase_finite(params).raw_sum
    zero_mode = 1 if params.lam > 1.0 else 0
    return wrap_phase(raw + math.pi * (zero_mode - up_parity))


def dicke_meanfield_oracle(d_value: float, l_value: float) -> Tuple[float, float]:
    """Minimize u - sqrt(D² + L²u) over u >= 0; returns (α = L²/2D, ⟨σx⟩ = -D/sqrt(D² + L²u*))"""
    if d_value <= 0.0:
        raise InvalidParameterError(f"D must be positive, got {d_value}")
    alpha = l_value ** 2 / (2.0 * d_value)

    def slope(u: float) -> float:
        return 1.0 - l_value ** 2 / (2.0 * math.sqrt(d_value ** 2 + l_value ** 2 * u))

    if slope(0.0) >= 0.0:
        u_star = 0.0
    else:
        u_star = optimize.brentq(slope, 0.0, max(1.0, l_value ** 2), xtol=1e-14, rtol=1e-15)
    sigma_x = -d_value / math.sqrt(d_value ** 2 + l_value ** 2 * u_star)
    return alpha, sigma_x


def lmg_meanfield_angle(h: float) -> float:
    """Polar angle minimizing the classical LMG energy -¼ sin²θ - (h/2) cos θ"""
    if not math.isfinite(h) or h < 0.0:
        raise InvalidParameterError(f"field h must be finite and >= 0, got {h}")

    def energy(theta: float) -> float:
        return -0.25 * math.sin(theta) ** 2 - 0.5 * h * math.cos(theta)

    result = optimize.minimize_scalar(energy, bounds=(0.0, math.pi), method="bounded",
                                      options={"xatol": 1e-10})
    theta = float(result.x)
    # The bounded search never lands exactly on θ = 0.
    return 0.0 if energy(0.0) <= energy(theta) else theta
