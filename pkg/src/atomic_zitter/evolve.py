"""Exact per-mode propagation of the two-component momentum-space state.

Each momentum node evolves under H(k) = k²·I + 2c_θk σ_x + Ṽ_z σ_z (full) or
H(k) = 2c_θk σ_x + Ṽ_z σ_z (Dirac). The constant A²/2m term is absorbed into the
energy zero. Propagators are the closed Pauli form of exp(-iHτ).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Union

import numpy as np

from .core import DimensionlessParams, GaussianSpec, SpinorK, gaussian_amplitude
from .errors import PreconditionError, UnsupportedRegimeError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class Limit(Enum):
    FULL = "full"
    DIRAC = "dirac"


@dataclass(frozen=True)
class ModeHamiltonian:
    k: float
    matrix: np.ndarray = field(repr=False)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class ModeTrajectory:
    """⟨x̂(τ)⟩ - ⟨x̂(0)⟩ of a single Dirac mode.

    ``displacement`` = ``velocity``·τ + ``offset`` + an oscillation at 2ω_k.
    """

    k: float
    omega: float
    tau: np.ndarray = field(repr=False)
    displacement: np.ndarray = field(repr=False)
    velocity: float
    offset: float

    def oscillation(self) -> np.ndarray:
        return self.displacement - self.velocity * self.tau - self.offset


def _coefficients(k: ArrayLike, params: DimensionlessParams, limit: Limit):
    k = np.asarray(k, dtype=float)
    a = k**2 if Limit(limit) is Limit.FULL else np.zeros_like(k)
    return a, 2 * params.c_theta * k, np.full_like(k, params.v_z)


def hamiltonian_k(
    k: float, params: DimensionlessParams, limit: Limit = Limit.FULL
) -> ModeHamiltonian:
    a, bx, bz = (float(c) for c in _coefficients(k, params, limit))
    matrix = np.array([[a + bz, bx], [bx, a - bz]], dtype=complex)
    return ModeHamiltonian(float(k), matrix)


def mode_frequency(k: ArrayLike, params: DimensionlessParams) -> np.ndarray:
    """ω_k = √(4c_θ²k² + Ṽ_z²)."""
    k = np.asarray(k, dtype=float)
    return np.hypot(2 * params.c_theta * k, params.v_z)


def pauli_exponential(
    a: ArrayLike, bx: ArrayLike, by: ArrayLike, bz: ArrayLike, tau: ArrayLike
) -> np.ndarray:
    """exp(-i(aI + b·σ)τ) for arrays of coefficients, shape (2, 2, ...)."""
    a, bx, by, bz = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (a, bx, by, bz)))
    b = np.sqrt(bx**2 + by**2 + bz**2)
    # sin(bτ)/b, finite at b = 0
    s = tau * np.sinc(b * tau / np.pi)
    cos = np.cos(b * tau)
    phase = np.exp(-1j * a * tau)
    return phase * np.array(
        [
            [cos - 1j * s * bz, -1j * s * bx - s * by],
            [-1j * s * bx + s * by, cos + 1j * s * bz],
        ]
    )


def mode_propagator(
    k: ArrayLike, tau: float, params: DimensionlessParams, limit: Limit = Limit.FULL
) -> np.ndarray:
    a, bx, bz = _coefficients(k, params, limit)
    return pauli_exponential(a, bx, 0.0, bz, tau)


def propagate(
    state: SpinorK, tau: float, params: DimensionlessParams, limit: Limit = Limit.FULL
) -> SpinorK:
    """Apply exp(-iH(k)τ) node by node.

    Args:
        state: Initial spinor Ψ(k, 0).
        tau: Reduced time; negative values evolve backwards.
        params: Gap and coupling of the mode Hamiltonian.
        limit: ``Limit.FULL`` keeps the k² kinetic term, ``Limit.DIRAC`` drops it.

    Returns:
        Ψ(k, τ) on the same grid.
    """
    u = mode_propagator(state.grid.nodes, tau, params, limit)
    return SpinorK(state.grid, np.einsum("ijn,jn->in", u, state.amplitudes))


def evolve_series(
    state: SpinorK,
    tau_grid: Iterable[float],
    params: DimensionlessParams,
    limit: Limit = Limit.FULL,
) -> Iterator[SpinorK]:
    """Propagate the same initial state to each τ; no step error accumulates."""
    for tau in tau_grid:
        yield propagate(state, float(tau), params, limit)


def closed_form_spinor(
    spec: GaussianSpec,
    k: ArrayLike,
    tau: float,
    params: DimensionlessParams,
    limit: Limit = Limit.FULL,
) -> np.ndarray:
    """Analytic Ψ(k, τ) for a Gaussian initial state, shape (2, ...).

    Uses the same exp(-iHτ) sign as :func:`propagate`, so amplitudes agree
    including their phase.
    """
    if not np.isclose(params.c_theta, 1.0):
        raise UnsupportedRegimeError(
            f"closed form holds for c_theta = 1, got {params.c_theta}", "evolve"
        )
    k = np.asarray(k, dtype=float)
    omega = mode_frequency(k, params)
    s = tau * np.sinc(omega * tau / np.pi)
    cos = np.cos(omega * tau)
    v = params.v_z
    c1, c2 = spec.c1, spec.c2
    first = c1 * cos - 1j * (c1 * v + 2 * k * c2) * s
    second = c2 * cos + 1j * (c2 * v - 2 * k * c1) * s
    envelope = gaussian_amplitude(spec, k)
    if Limit(limit) is Limit.FULL:
        envelope = envelope * np.exp(-1j * k**2 * tau)
    return np.array([first, second]) * envelope


def mode_zb_trajectory(
    k: float,
    c1: complex,
    c2: complex,
    params: DimensionlessParams,
    tau_grid: Iterable[float],
) -> ModeTrajectory:
    """Heisenberg-picture displacement of a plane-wave mode under H_Dirac(k).

    With H = ω n·σ the Pauli vector precesses about n at 2ω and ẋ = 2c_θσ_x.
    """
    if abs(abs(c1) ** 2 + abs(c2) ** 2 - 1.0) > 1e-12:
        raise PreconditionError("|c1|^2 + |c2|^2 must be 1", "evolve")
    tau = np.asarray(list(tau_grid), dtype=float)
    spinor = np.array([c1, c2], dtype=complex)
    sx = 2 * (spinor[0].conjugate() * spinor[1]).real
    sy = 2 * (spinor[0].conjugate() * spinor[1]).imag
    sz = abs(spinor[0]) ** 2 - abs(spinor[1]) ** 2
    c = params.c_theta
    omega = float(mode_frequency(k, params))
    if omega == 0.0:
        velocity = 2 * c * sx
        return ModeTrajectory(k, 0.0, tau, velocity * tau, velocity, 0.0)
    nx, nz = 2 * c * k / omega, params.v_z / omega
    along = nx * sx + nz * sz
    velocity = 2 * c * nx * along
    offset = -2 * c * nz * sy / (2 * omega)
    displacement = (
        velocity * tau
        + 2 * c * (sx - nx * along) * np.sin(2 * omega * tau) / (2 * omega)
        + offset * (1 - np.cos(2 * omega * tau))
    )
    return ModeTrajectory(k, omega, tau, displacement, velocity, offset)
