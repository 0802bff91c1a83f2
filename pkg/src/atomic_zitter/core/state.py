"""Gaussian initial states and two-component spinors in k and x space.

Fourier convention: Ψ(x) = (2π)^(-1/2) ∫ dk e^{ikx} Ψ(k). On the discrete grids
this is evaluated with numpy's FFT so that Parseval holds to rounding.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from ..errors import PreconditionError, TruncationError
from .grid import KGrid, XGrid

logger = logging.getLogger(__name__)

# Gaussian must sit this many widths inside the grid
TRUNCATION_WIDTHS = 6.0
TRUNCATION_TOLERANCE = 1e-6


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != 2:
        raise PreconditionError(
            f"spinor amplitudes must have shape (2, n), got {arr.shape}", "core"
        )
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GaussianSpec:
    """Initial state c_i·(Δ√π)^(-1/2)·exp(-(k-k0)²/2Δ²) for both components."""

    k0: float
    delta: float
    c1: complex = 1.0
    c2: complex = 0.0

    def __post_init__(self):
        if not self.delta > 0:
            raise PreconditionError(
                f"delta must be positive, got {self.delta}", "core"
            )
        weight = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(weight - 1.0) > 1e-12:
            raise PreconditionError(
                f"|c1|^2 + |c2|^2 must be 1, got {weight:.15g}", "core"
            )

    @classmethod
    def superposition(
        cls, k0: float, delta: float, relative_phase: float = 0.0
    ) -> "GaussianSpec":
        """The (1, e^{iφ})ᵀ/√2 spinor used throughout the figures."""
        w = 1 / math.sqrt(2)
        return cls(k0, delta, complex(w), w * cmath.exp(1j * relative_phase))

    @property
    def weights(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)


@dataclass(frozen=True)
class SpinorK:
    """Two-component state Ψ(k) sampled on a momentum grid."""

    grid: KGrid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.shape[1] != self.grid.n:
            raise PreconditionError(
                f"{amps.shape[1]} amplitudes for a grid of {self.grid.n} nodes",
                "core",
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def density(self) -> np.ndarray:
        """ρ(k) = |Ψ₁|² + |Ψ₂|²."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def norm(self) -> float:
        return float(trapezoid(self.density, dx=self.grid.dk))


@dataclass(frozen=True)
class SpinorX:
    """Two-component state Ψ(x) on the position grid conjugate to ``k_grid``."""

    k_grid: KGrid
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))

    @property
    def grid(self) -> XGrid:
        return self.k_grid.position_grid()

    @property
    def density(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=0)

    def norm(self) -> float:
        return float(trapezoid(self.density, dx=self.grid.dx))


def gaussian_amplitude(spec: GaussianSpec, k: np.ndarray) -> np.ndarray:
    """Un-weighted envelope (Δ√π)^(-1/2)·exp(-(k-k0)²/2Δ²)."""
    k = np.asarray(k, dtype=float)
    return (spec.delta * math.sqrt(math.pi)) ** -0.5 * np.exp(
        -((k - spec.k0) ** 2) / (2 * spec.delta**2)
    )


def sample_gaussian(spec: GaussianSpec, grid: KGrid) -> SpinorK:
    """Sample ``spec`` on ``grid`` and renormalise to unit discrete norm."""
    reach = TRUNCATION_WIDTHS * spec.delta
    envelope = gaussian_amplitude(spec, grid.nodes)
    raw_norm = float(trapezoid(envelope**2, dx=grid.dk))
    deficit = abs(1.0 - raw_norm)
    if not grid.covers(spec.k0 - reach, spec.k0 + reach) or deficit > TRUNCATION_TOLERANCE:
        raise TruncationError(
            f"grid [{grid.k_min}, {grid.k_max}] with n={grid.n} does not resolve "
            f"k0={spec.k0}, delta={spec.delta} (norm deficit {deficit:.3g})"
        )
    logger.debug("Sampled Gaussian k0=%g delta=%g, norm deficit %.3g", spec.k0, spec.delta, deficit)
    amplitudes = np.outer(spec.weights, envelope) / math.sqrt(raw_norm)
    return SpinorK(grid, amplitudes)


def to_position(state: SpinorK) -> SpinorX:
    """Transform a momentum-space spinor to the conjugate position grid.

    Args:
        state: Spinor sampled on a uniform momentum grid.

    Returns:
        The spinor on the position grid returned by ``state.grid.position_grid()``,
        with the same discrete norm.
    """
    grid = state.grid
    x = grid.position_grid().nodes
    scale = grid.dk * grid.n / math.sqrt(2 * math.pi)
    psi_x = (
        scale
        * np.exp(1j * grid.k_min * x)
        * np.fft.fftshift(np.fft.ifft(state.amplitudes, axis=1), axes=1)
    )
    return SpinorX(grid, psi_x)


def from_position(state: SpinorX) -> SpinorK:
    """Inverse of :func:`to_position`."""
    grid = state.k_grid
    xgrid = grid.position_grid()
    x = xgrid.nodes
    shifted = np.fft.ifftshift(np.exp(-1j * grid.k_min * x) * state.amplitudes, axes=1)
    psi_k = xgrid.dx / math.sqrt(2 * math.pi) * np.fft.fft(shifted, axis=1)
    return SpinorK(grid, psi_k)
