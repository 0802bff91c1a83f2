"""Laboratory and reduced parameter sets and the conversions between them.

Reduced units: energy in ħ²κ²/2m, time in 2m/ħκ², momentum in κ and length
in 1/κ. In these units the recoil velocity ħκ/m equals 2.
"""
import logging
import math
from dataclasses import dataclass

from scipy import constants

from ..errors import PreconditionError

logger = logging.getLogger(__name__)

RB87_MASS = 86.909180527 * constants.atomic_mass
RB87_D2_WAVELENGTH = 780.241e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame inputs of the tripod scheme (SI units)."""

    mass: float
    kappa: float
    theta: float
    v1: float
    v3: float
    hbar: float = constants.hbar

    def __post_init__(self):
        if not self.mass > 0:
            raise PreconditionError(f"mass must be positive, got {self.mass}", "core")
        if not self.kappa > 0:
            raise PreconditionError(
                f"kappa must be positive, got {self.kappa}", "core"
            )
        if not 0.0 <= self.theta <= math.pi / 2:
            raise PreconditionError(
                f"theta must lie in [0, pi/2], got {self.theta}", "core"
            )

    @classmethod
    def from_wavelength(
        cls, mass: float, wavelength: float, theta: float, v1: float, v3: float
    ) -> "PhysicalParams":
        if not wavelength > 0:
            raise PreconditionError(
                f"wavelength must be positive, got {wavelength}", "core"
            )
        return cls(mass=mass, kappa=2 * math.pi / wavelength, theta=theta, v1=v1, v3=v3)

    @classmethod
    def rb87(cls, theta: float, v1: float, v3: float) -> "PhysicalParams":
        """⁸⁷Rb driven on the D2 line."""
        return cls.from_wavelength(RB87_MASS, RB87_D2_WAVELENGTH, theta, v1, v3)


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced model constants: gap ``v_z`` and coupling scale ``c_theta``."""

    v_z: float
    c_theta: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.v_z):
            raise PreconditionError(f"v_z must be finite, got {self.v_z}", "core")
        if not 0.0 <= self.c_theta <= 1.0:
            raise PreconditionError(
                f"c_theta must lie in [0, 1], got {self.c_theta}", "core"
            )


def recoil_energy(p: PhysicalParams) -> float:
    """Energy unit ħ²κ²/2m in joules."""
    return (p.hbar * p.kappa) ** 2 / (2 * p.mass)


def time_unit(p: PhysicalParams) -> float:
    """Time unit 2m/ħκ² in seconds."""
    return p.hbar / recoil_energy(p)


def length_unit(p: PhysicalParams) -> float:
    return 1.0 / p.kappa


def recoil_velocity(p: PhysicalParams) -> float:
    """Effective speed of light c̃ = ħκ/m in m/s."""
    return p.hbar * p.kappa / p.mass


def width_to_delta(sigma: float, kappa: float) -> float:
    """Map a position width σ (metres) to the reduced momentum width Δ = √2/σ."""
    if not sigma > 0:
        raise PreconditionError(f"sigma must be positive, got {sigma}", "core")
    return math.sqrt(2.0) / (sigma * kappa)


def reduce_params(p: PhysicalParams) -> DimensionlessParams:
    """Reduce laboratory parameters to the gap Ṽ_z and the coupling cos θ."""
    from ..tripod import rest_energy, scalar_potentials

    phi, v = scalar_potentials(p.theta, p.kappa, p.v1, p.v3, p.mass, hbar=p.hbar)
    v_z = rest_energy(phi, v) / recoil_energy(p)
    # cos(pi/2) is 6e-17, not 0
    c_theta = 0.0 if math.isclose(p.theta, math.pi / 2) else math.cos(p.theta)
    logger.debug("Reduced %s to v_z=%.6g c_theta=%.6g", p, v_z, c_theta)
    return DimensionlessParams(v_z=v_z, c_theta=c_theta)
