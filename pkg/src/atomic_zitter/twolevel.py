"""Two-level reduction: slowly varying envelopes times dark-state populations.

Writing Ψᵢ(x, τ) = cᵢ(τ)φᵢ(x) turns the Dirac dynamics into a driven two-level
system with coupling Ω̃ = (c̃/ħ)⟨φ₂|p_x|φ₁⟩ and shifts V_zi = ⟨φᵢ|V_z|φᵢ⟩.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .core import DimensionlessParams, SpinorK, XGrid, to_position
from .errors import NormalizationError
from .evolve import pauli_exponential

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-8
EMPTY_COMPONENT = 1e-12


@dataclass(frozen=True)
class TwoLevelParams:
    omega_tilde: complex
    vz1: float
    vz2: float


@dataclass(frozen=True)
class PopulationSeries:
    tau: np.ndarray = field(repr=False)
    n1: np.ndarray = field(repr=False)
    n2: np.ndarray = field(repr=False)

    @property
    def delta_n(self) -> np.ndarray:
        return self.n1 - self.n2


def _check_normalised(phi: np.ndarray, grid: XGrid, label: str) -> None:
    norm = trapezoid(np.abs(phi) ** 2, dx=grid.dx)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise NormalizationError(f"<{label}|{label}> = {norm:.12g}, expected 1", "twolevel")


def momentum(phi: np.ndarray, grid: XGrid) -> np.ndarray:
    """-i∂ₓφ by spectral differentiation."""
    wavenumbers = 2 * np.pi * np.fft.fftfreq(grid.n, d=grid.dx)
    return np.fft.ifft(wavenumbers * np.fft.fft(phi))


def coupling_overlap(
    phi1: np.ndarray, phi2: np.ndarray, grid: XGrid, params: DimensionlessParams
) -> complex:
    """Ω̃ = 2c_θ⟨φ₂|-i∂ₓ|φ₁⟩ in reduced units (c̃ = 2)."""
    _check_normalised(phi1, grid, "phi1")
    _check_normalised(phi2, grid, "phi2")
    integrand = np.conj(phi2) * momentum(phi1, grid)
    return complex(2 * params.c_theta * trapezoid(integrand, dx=grid.dx))


def rabi_frequency(p: TwoLevelParams) -> float:
    """ω_R = √(|Ω̃|² + ¼(V_z1 - V_z2)²)."""
    return float(np.hypot(abs(p.omega_tilde), 0.5 * (p.vz1 - p.vz2)))


def max_transfer(p: TwoLevelParams) -> float:
    """Largest population moved out of a single level, |Ω̃|²/ω_R²."""
    omega_r = rabi_frequency(p)
    return 0.0 if omega_r == 0 else abs(p.omega_tilde) ** 2 / omega_r**2


def evolve_populations(
    c0: Sequence[complex], p: TwoLevelParams, tau_grid: Iterable[float]
) -> PopulationSeries:
    """Exact evolution under the matrix ((V_z1, Ω̃), (Ω̃*, V_z2))."""
    c0 = np.asarray(c0, dtype=complex)
    weight = float(np.sum(np.abs(c0) ** 2))
    if abs(weight - 1.0) > 1e-12:
        raise NormalizationError(f"|c0|^2 = {weight:.15g}, expected 1", "twolevel")
    tau = np.asarray(list(tau_grid), dtype=float)
    u = pauli_exponential(
        0.5 * (p.vz1 + p.vz2),
        p.omega_tilde.real,
        -p.omega_tilde.imag,
        0.5 * (p.vz1 - p.vz2),
        tau,
    )
    c = np.einsum("ij...,j->i...", u, c0)
    return PopulationSeries(tau, np.abs(c[0]) ** 2, np.abs(c[1]) ** 2)


def reduce_state(
    state: SpinorK, params: DimensionlessParams
) -> Tuple[TwoLevelParams, np.ndarray]:
    """Factor a spinor into normalised envelopes and real amplitudes c₀."""
    psi = to_position(state)
    grid = psi.grid
    norms = np.sqrt(trapezoid(np.abs(psi.amplitudes) ** 2, dx=grid.dx, axis=1))
    if np.all(norms < EMPTY_COMPONENT):
        raise NormalizationError("state has no weight in either component", "twolevel")
    envelopes = []
    for i in (0, 1):
        source = i if norms[i] >= EMPTY_COMPONENT else 1 - i
        envelopes.append(psi.amplitudes[source] / norms[source])
    omega_tilde = coupling_overlap(envelopes[0], envelopes[1], grid, params)
    reduced = TwoLevelParams(omega_tilde, params.v_z, -params.v_z)
    c0 = norms / np.sqrt(np.sum(norms**2))
    logger.debug("Two-level reduction: %s, c0=%s", reduced, c0)
    return reduced, c0.astype(complex)
