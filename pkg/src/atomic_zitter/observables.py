"""Observables of evolved spinors: populations, centre of mass and densities."""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .core import (
    DimensionlessParams,
    GaussianSpec,
    KGrid,
    SpinorK,
    SpinorX,
    from_position,
    make_k_grid,
    sample_gaussian,
    to_position,
)
from .errors import PreconditionError, ResolutionError
from .evolve import Limit, propagate

logger = logging.getLogger(__name__)

SPACES = ("x", "k")
OUTSIDE_MASS_TOLERANCE = 1e-8
IMAGINARY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DensityMap:
    """Component densities per τ row, shape (len(tau), 2, len(axis))."""

    space: str
    tau: np.ndarray = field(repr=False)
    axis: np.ndarray = field(repr=False)
    components: np.ndarray = field(repr=False)

    @property
    def spacing(self) -> float:
        return float(self.axis[1] - self.axis[0])

    @property
    def values(self) -> np.ndarray:
        return self.components.sum(axis=1)

    def row_integrals(self) -> np.ndarray:
        return trapezoid(self.values, dx=self.spacing, axis=1)


@dataclass(frozen=True)
class ObservableSeries:
    tau: np.ndarray = field(repr=False)
    centre_of_mass: np.ndarray = field(repr=False)
    n1: np.ndarray = field(repr=False)
    n2: np.ndarray = field(repr=False)
    norm: np.ndarray = field(repr=False)
    densities: Dict[str, DensityMap] = field(default_factory=dict, repr=False)

    @property
    def delta_n(self) -> np.ndarray:
        return self.n1 - self.n2

    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm - self.norm[0])))

    def population_error(self) -> float:
        return float(np.max(np.abs(self.n1 + self.n2 - 1.0)))


def populations(state: SpinorK) -> Tuple[float, float]:
    """(N₁, N₂) = ∫dk |Ψᵢ(k)|² by the trapezoidal rule."""
    n1, n2 = trapezoid(np.abs(state.amplitudes) ** 2, dx=state.grid.dk, axis=1)
    return float(n1), float(n2)


def _resolved_position(state: SpinorK) -> SpinorX:
    psi = to_position(state)
    x = psi.grid.nodes
    limit = math.pi / (4 * state.grid.dk)
    outside = float(np.sum(psi.density[np.abs(x) >= limit]) * psi.grid.dx)
    if outside > OUTSIDE_MASS_TOLERANCE:
        raise ResolutionError(
            f"phase gradient not resolved: weight {outside:.3g} beyond |x| = {limit:.4g}; "
            "refine the momentum grid"
        )
    return psi


def centre_of_mass(state: SpinorK) -> float:
    """x̄ = i∫dk Ψ†∂ₖΨ, with i∂ₖ applied spectrally as multiplication by x."""
    psi = _resolved_position(state)
    x_psi = from_position(SpinorX(state.grid, psi.grid.nodes * psi.amplitudes))
    integrand = np.sum(np.conj(state.amplitudes) * x_psi.amplitudes, axis=0)
    value = complex(trapezoid(integrand, dx=state.grid.dk))
    if abs(value.imag) > IMAGINARY_TOLERANCE:
        raise ResolutionError(f"centre of mass has imaginary part {value.imag:.3g}")
    return value.real


def position_moment(state: SpinorK) -> float:
    """∫x ρ(x) dx evaluated on the position grid."""
    psi = to_position(state)
    return float(trapezoid(psi.grid.nodes * psi.density, dx=psi.grid.dx))


def _component_density(state: SpinorK, space: str) -> np.ndarray:
    if space == "k":
        return np.abs(state.amplitudes) ** 2
    return np.abs(to_position(state).amplitudes) ** 2


def _axis(grid: KGrid, space: str) -> np.ndarray:
    if space not in SPACES:
        raise PreconditionError(f"space must be one of {SPACES}, got {space!r}", "observables")
    return grid.nodes if space == "k" else grid.position_grid().nodes


def density_map(
    spec: GaussianSpec,
    params: DimensionlessParams,
    tau_grid: Iterable[float],
    space: str = "x",
    grid: Optional[KGrid] = None,
    limit: Limit = Limit.FULL,
) -> DensityMap:
    """Component densities |Ψ₁|², |Ψ₂|² at each τ, in x or k space.

    Args:
        spec: Initial Gaussian packet.
        params: Gap and coupling of the mode Hamiltonian.
        tau_grid: Times at which to record a row.
        space: ``"x"`` or ``"k"``.
        grid: Momentum grid; the default grid when omitted.
        limit: Hamiltonian to evolve with.

    Returns:
        A DensityMap whose rows integrate to one.

    Raises:
        PreconditionError: If ``space`` is not ``"x"`` or ``"k"``.
        TruncationError: If the grid does not hold the packet.
    """
    grid = grid or make_k_grid()
    axis = _axis(grid, space)
    tau = np.asarray(list(tau_grid), dtype=float)
    initial = sample_gaussian(spec, grid)
    rows = np.array(
        [_component_density(propagate(initial, t, params, limit), space) for t in tau]
    )
    return DensityMap(space, tau, axis, rows)


def observe(
    spec: GaussianSpec,
    params: DimensionlessParams,
    tau_grid: Iterable[float],
    grid: Optional[KGrid] = None,
    limit: Limit = Limit.FULL,
    densities: Iterable[str] = (),
    density_stride: int = 1,
) -> ObservableSeries:
    """Evolve ``spec`` and record x̄, N₁, N₂, the norm and any density maps.

    Density rows are kept for every ``density_stride``-th sample only.

    Raises:
        ResolutionError: If the grid does not resolve the phase at some τ.
    """
    if density_stride < 1:
        raise PreconditionError("density_stride must be >= 1", "observables")
    grid = grid or make_k_grid()
    tau = np.asarray(list(tau_grid), dtype=float)
    spaces = tuple(dict.fromkeys(densities))
    axes = {space: _axis(grid, space) for space in spaces}
    initial = sample_gaussian(spec, grid)
    com, n1, n2, norm = (np.empty(len(tau)) for _ in range(4))
    rows: Dict[str, list] = {space: [] for space in spaces}
    for i, t in enumerate(tau):
        state = propagate(initial, t, params, limit)
        com[i] = centre_of_mass(state)
        n1[i], n2[i] = populations(state)
        norm[i] = state.norm()
        if i % density_stride:
            continue
        for space in spaces:
            rows[space].append(_component_density(state, space))
    logger.info(
        "Observed %d samples up to tau=%g (%s limit)",
        len(tau),
        tau[-1] if len(tau) else 0.0,
        Limit(limit).value,
    )
    kept = tau[::density_stride]
    maps = {s: DensityMap(s, kept, axes[s], np.array(rows[s])) for s in spaces}
    return ObservableSeries(tau, com, n1, n2, norm, maps)
