"""Dark states of the tripod scheme and the gauge potentials they induce.

Basis ordering for the interaction Hamiltonian is (|0⟩, |1⟩, |2⟩, |3⟩) with |0⟩
the excited state; dark states are stored over the ground states (|1⟩, |2⟩, |3⟩).
Laser fields: Ω₁ = Ω sinθ e^{-iκx}/√2, Ω₂ = Ω sinθ e^{iκx}/√2, Ω₃ = Ω cosθ e^{-iκy}.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import constants

from .errors import PreconditionError, StepTooLargeError, ZeroFieldError

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
DEFAULT_STEP = 1e-5
MAX_STEP = 1e-4


@dataclass(frozen=True)
class DarkStatePair:
    theta: float
    kappa: float
    x: float
    y: float
    d1: np.ndarray = field(repr=False)
    d2: np.ndarray = field(repr=False)

    @property
    def vectors(self) -> np.ndarray:
        """Rows |D₁⟩, |D₂⟩ over the ground states."""
        return np.vstack([self.d1, self.d2])

    def embedded(self) -> np.ndarray:
        """Rows |D₁⟩, |D₂⟩ in the four-level basis (no |0⟩ component)."""
        return np.hstack([np.zeros((2, 1), dtype=complex), self.vectors])

    def shifted(self, dx: float = 0.0, dy: float = 0.0) -> "DarkStatePair":
        return dark_states(self.theta, self.kappa, self.x + dx, self.y + dy)


@dataclass(frozen=True)
class VectorPotential:
    """x-component of Â together with the effective wave number κ′ = κ cos θ."""

    matrix: np.ndarray = field(repr=False)
    kappa_prime: float


@dataclass(frozen=True)
class GaugePotentials:
    a: np.ndarray
    phi: np.ndarray
    v: np.ndarray


def mixing_angle(
    omega1: complex, omega2: complex, omega3: complex
) -> Tuple[float, float]:
    """Return (θ, Ω) with tan θ = √(|Ω₁|²+|Ω₂|²)/|Ω₃| and Ω = √Σ|Ωₙ|²."""
    transverse = math.hypot(abs(omega1), abs(omega2))
    total = math.hypot(transverse, abs(omega3))
    if total == 0.0:
        raise ZeroFieldError("all three Rabi frequencies vanish")
    return math.atan2(transverse, abs(omega3)), total


def rabi_frequencies(
    theta: float, kappa: float, x: float, y: float, omega_total: float = 1.0
) -> np.ndarray:
    s = omega_total * math.sin(theta) / math.sqrt(2)
    return np.array(
        [
            s * np.exp(-1j * kappa * x),
            s * np.exp(1j * kappa * x),
            omega_total * math.cos(theta) * np.exp(-1j * kappa * y),
        ]
    )


def interaction_hamiltonian(
    theta: float,
    kappa: float,
    x: float,
    y: float,
    omega_total: float = 1.0,
    hbar: float = 1.0,
) -> np.ndarray:
    """H_int = -ħ Σₙ Ωₙ|0⟩⟨n| + h.c. as a 4×4 matrix."""
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1:] = -hbar * rabi_frequencies(theta, kappa, x, y, omega_total)
    h[1:, 0] = h[0, 1:].conj()
    return h


def dark_states(theta: float, kappa: float, x: float, y: float) -> DarkStatePair:
    """Orthonormal dark states at (x, y)."""
    ey = np.exp(-1j * kappa * y)
    plus, minus = np.exp(1j * kappa * x), np.exp(-1j * kappa * x)
    r = 1 / math.sqrt(2)
    d1 = np.array([ey * plus * r, -ey * minus * r, 0.0], dtype=complex)
    c = math.cos(theta)
    d2 = np.array(
        [c * ey * plus * r, c * ey * minus * r, -math.sin(theta)], dtype=complex
    )
    return DarkStatePair(theta, kappa, x, y, d1, d2)


def vector_potential(
    theta: float, kappa: float, hbar: float = constants.hbar
) -> VectorPotential:
    """Â_x = -ħκ cos θ σ_x."""
    c = 0.0 if math.isclose(theta, math.pi / 2) else math.cos(theta)
    return VectorPotential(-hbar * kappa * c * SIGMA_X, kappa * c)


def vector_potential_y(
    theta: float, kappa: float, hbar: float = constants.hbar
) -> np.ndarray:
    """Â_y = ħκ diag(1, cos²θ), from the common e^{-iκy} phase."""
    return hbar * kappa * np.diag([1.0, math.cos(theta) ** 2]).astype(complex)


def scalar_potentials(
    theta: float,
    kappa: float,
    v1: float,
    v3: float,
    mass: float,
    hbar: float = constants.hbar,
) -> Tuple[np.ndarray, np.ndarray]:
    """Return (Φ, V); the first two trap potentials are taken equal."""
    if not mass > 0:
        raise PreconditionError(f"mass must be positive, got {mass}", "tripod")
    recoil = (hbar * kappa) ** 2 / (2 * mass)
    s2 = math.sin(theta) ** 2
    phi = recoil * np.diag([s2, math.sin(2 * theta) ** 2 / 4])
    v = np.diag([v1, v1 * (1 - s2) + v3 * s2])
    return phi, v


def gauge_potentials(
    theta: float,
    kappa: float,
    v1: float,
    v3: float,
    mass: float,
    hbar: float = constants.hbar,
) -> GaugePotentials:
    phi, v = scalar_potentials(theta, kappa, v1, v3, mass, hbar)
    return GaugePotentials(vector_potential(theta, kappa, hbar).matrix, phi, v)


def rest_energy(phi: np.ndarray, v: np.ndarray) -> float:
    """V_z = ½[V₁₁ + Φ₁₁ - (V₂₂ + Φ₂₂)]; the shifted potential is V_z σ_z."""
    return 0.5 * float(np.real(v[0, 0] + phi[0, 0] - v[1, 1] - phi[1, 1]))


def _check_step(step: float, kappa: float) -> None:
    if not 0 < step * kappa <= MAX_STEP:
        raise StepTooLargeError(
            f"step*kappa must lie in (0, {MAX_STEP}], got {step * kappa:.3g}"
        )


def _gradient(states: DarkStatePair, step: float) -> Tuple[np.ndarray, np.ndarray]:
    """Central differences of the state rows along x and y."""
    ddx = (states.shifted(dx=step).vectors - states.shifted(dx=-step).vectors) / (
        2 * step
    )
    ddy = (states.shifted(dy=step).vectors - states.shifted(dy=-step).vectors) / (
        2 * step
    )
    return ddx, ddy


def connection_numeric(
    states: DarkStatePair,
    step: float,
    axis: str = "x",
    hbar: float = constants.hbar,
) -> np.ndarray:
    """Finite-difference estimate of A_nm = iħ⟨Dₙ|∂Dₘ⟩ along ``axis``."""
    _check_step(step, states.kappa)
    ddx, ddy = _gradient(states, step)
    derivative = {"x": ddx, "y": ddy}.get(axis)
    if derivative is None:
        raise PreconditionError(f"axis must be 'x' or 'y', got {axis!r}", "tripod")
    return 1j * hbar * states.vectors.conj() @ derivative.T


def scalar_potential_numeric(
    states: DarkStatePair,
    step: float,
    mass: float,
    hbar: float = constants.hbar,
) -> np.ndarray:
    """Φ from the dark-state gradients with the in-manifold part of Â removed."""
    _check_step(step, states.kappa)
    if not mass > 0:
        raise PreconditionError(f"mass must be positive, got {mass}", "tripod")
    overlap = np.zeros((2, 2), dtype=complex)
    for derivative in _gradient(states, step):
        a = 1j * hbar * states.vectors.conj() @ derivative.T
        overlap += hbar**2 * derivative.conj() @ derivative.T - a @ a
    return overlap / (2 * mass)
