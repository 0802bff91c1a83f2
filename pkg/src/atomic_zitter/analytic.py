"""Closed-form oracles for the equal-superposition Gaussian packet.

All formulas assume the initial spinor (1, 1)ᵀ/√2. Drift and Zitterbewegung
additionally assume k₀ = 0. Two forms are offered where the literature
expression and the exact evaluation of its own integral disagree:

* ``Form.RESOLVED`` (default) evaluates the centre-of-mass integral of the
  propagator used in :mod:`atomic_zitter.evolve`, for any c_θ;
* ``Form.PRINTED`` keeps the literature expression (c_θ = 1 only).
"""
import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np
from scipy import special

from .core import (
    DimensionlessParams,
    PhysicalParams,
    recoil_velocity,
    reduce_params,
    time_unit,
    width_to_delta,
)
from .core.params import recoil_energy
from .errors import (
    AsymptoticDivergenceWarning,
    PreconditionError,
    UnsupportedRegimeError,
    ValidityWarning,
)
from .evolve import mode_frequency

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

ASYMPTOTIC_SWITCH = 25.0
ASYMPTOTIC_TERMS = 8
MIN_ASYMPTOTIC_RATIO = 3.0
MIN_ZITTER_RATIO = 5.0


class Form(Enum):
    RESOLVED = "resolved"
    PRINTED = "printed"


class DriftRegime(Enum):
    EXACT_ERFC = "exact-erfc"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class DriftResult:
    x_d: ArrayLike
    regime: DriftRegime
    bracket: float
    slope: float


@dataclass(frozen=True)
class PhysicalScales:
    v_z: float
    delta: float
    recoil_velocity: float
    zb_frequency: float
    damping_onset: float
    damping_onset_printed: float
    time_unit: float


def erfc(x: ArrayLike) -> ArrayLike:
    return special.erfc(x)


def erfcx(x: ArrayLike) -> ArrayLike:
    """e^{x²}·erfc(x) without overflow."""
    return special.erfcx(x)


def _require_unit_coupling(params: DimensionlessParams) -> None:
    if not math.isclose(params.c_theta, 1.0):
        raise UnsupportedRegimeError(
            f"printed form assumes c_theta = 1, got {params.c_theta}", "analytic"
        )


def _check_delta(delta: float) -> None:
    if not delta > 0:
        raise PreconditionError(f"delta must be positive, got {delta}", "analytic")


def _drift_argument(
    params: DimensionlessParams, delta: float, form: Form
) -> Tuple[float, float]:
    """Return (y, scale) so that x_d = scale·τ·[1 - √π y erfcx(y)]."""
    _check_delta(delta)
    v = abs(params.v_z)
    if Form(form) is Form.PRINTED:
        _require_unit_coupling(params)
        return v / delta, 1.0
    if params.c_theta == 0:
        return math.inf, 0.0
    return v / (2 * params.c_theta * delta), 2 * params.c_theta


def drift_bracket(y: float) -> float:
    """1 - √π y e^{y²} erfc(y)."""
    if math.isinf(y):
        return 0.0
    return float(1.0 - math.sqrt(math.pi) * y * erfcx(y))


def _series_bracket(y: float, n_terms: int) -> float:
    # terms (-1)^n (2n)!/(n!(2y)^{2n}); the n = 0 term cancels the leading 1
    term, total = 1.0, 0.0
    for n in range(1, n_terms + 1):
        term *= -2 * (2 * n - 1) / (2 * y) ** 2
        total += term
    return -total


def drift(
    tau: ArrayLike,
    params: DimensionlessParams,
    delta: float,
    form: Form = Form.RESOLVED,
) -> DriftResult:
    """Centre-of-mass drift x_d(τ) = slope·τ."""
    y, scale = _drift_argument(params, delta, form)
    if abs(params.v_z) / delta > ASYMPTOTIC_SWITCH and not math.isinf(y):
        bracket, regime = _series_bracket(y, ASYMPTOTIC_TERMS), DriftRegime.ASYMPTOTIC
    else:
        bracket, regime = drift_bracket(y), DriftRegime.EXACT_ERFC
    slope = scale * bracket
    return DriftResult(slope * np.asarray(tau, dtype=float), regime, bracket, slope)


def optimal_terms(y: float) -> int:
    """Index of the smallest term of the erfc asymptotic series, ⌊y²⌋."""
    return int(math.floor(y * y))


def drift_asymptotic(
    tau: ArrayLike,
    params: DimensionlessParams,
    delta: float,
    n_terms: int,
    form: Form = Form.RESOLVED,
) -> DriftResult:
    """Drift from the asymptotic erfc series truncated after ``n_terms`` corrections."""
    _check_delta(delta)
    ratio = abs(params.v_z) / delta
    if ratio < MIN_ASYMPTOTIC_RATIO:
        raise PreconditionError(
            f"asymptotic drift needs v_z/delta >= {MIN_ASYMPTOTIC_RATIO}, got {ratio:.4g}",
            "analytic",
        )
    if n_terms < 0:
        raise PreconditionError(f"n_terms must be >= 0, got {n_terms}", "analytic")
    y, scale = _drift_argument(params, delta, form)
    if math.isinf(y):
        zeros = np.zeros_like(np.asarray(tau, dtype=float))
        return DriftResult(zeros, DriftRegime.ASYMPTOTIC, 0.0, 0.0)
    best = optimal_terms(y)
    if n_terms > best:
        logger.warning("Asymptotic series truncated at %d > optimal %d", n_terms, best)
        warnings.warn(
            f"{n_terms} terms exceed the optimal truncation {best} at y={y:.4g}",
            AsymptoticDivergenceWarning,
            stacklevel=2,
        )
    bracket = _series_bracket(y, n_terms)
    slope = scale * bracket
    return DriftResult(slope * np.asarray(tau, dtype=float), DriftRegime.ASYMPTOTIC, bracket, slope)


def _check_zitter_regime(params: DimensionlessParams, delta: float) -> None:
    _check_delta(delta)
    if params.v_z == 0:
        raise PreconditionError("Zitterbewegung term needs v_z != 0", "analytic")
    ratio = abs(params.v_z) / delta
    if ratio < MIN_ZITTER_RATIO:
        logger.warning("zitter_term used at v_z/delta = %.3g", ratio)
        warnings.warn(
            f"damped Zitterbewegung formula needs v_z/delta >= {MIN_ZITTER_RATIO}, got {ratio:.3g}",
            ValidityWarning,
            stacklevel=3,
        )


def zitter_term(
    tau: ArrayLike,
    params: DimensionlessParams,
    delta: float,
    form: Form = Form.RESOLVED,
    order: int = 2,
) -> np.ndarray:
    """Damped oscillating part x_z(τ) of the centre of mass.

    ``order=1`` keeps the leading stationary-phase term; ``order=2`` adds the
    first corrections in (c_θΔ/Ṽ_z)².
    """
    if order not in (1, 2):
        raise PreconditionError(f"order must be 1 or 2, got {order}", "analytic")
    _check_zitter_regime(params, delta)
    tau = np.asarray(tau, dtype=float)
    if Form(form) is Form.PRINTED:
        _require_unit_coupling(params)
        v = params.v_z
        beta = delta**2 * tau / (4 * v)
        return np.sin(2 * v * tau + 0.5 * np.arctan(beta)) / (v * (1 + beta**2) ** 0.25)
    c = params.c_theta
    if c == 0:
        return np.zeros_like(tau)
    v = abs(params.v_z)
    d = c * delta
    z = 1 - 4j * d**2 * tau / v
    bracket = z**-0.5
    if order == 2:
        bracket = bracket - 3 * (d / v) ** 2 * z**-1.5 - 3j * tau * d**4 / v**3 * z**-2.5
    return np.imag(c / v * np.exp(2j * v * tau) * bracket)


def zitter_envelope(
    tau: ArrayLike,
    params: DimensionlessParams,
    delta: float,
    form: Form = Form.RESOLVED,
) -> np.ndarray:
    """Leading-order amplitude of x_z(τ)."""
    _check_delta(delta)
    tau = np.asarray(tau, dtype=float)
    v = abs(params.v_z)
    if Form(form) is Form.PRINTED:
        _require_unit_coupling(params)
        return (1 + delta**4 * tau**2 / (16 * v**2)) ** -0.25 / v
    c = params.c_theta
    beta = 4 * (c * delta) ** 2 * tau / v
    return c / v * (1 + beta**2) ** -0.25


def damping_onset(
    params: DimensionlessParams, delta: float, form: Form = Form.RESOLVED
) -> float:
    """Reduced time at which the envelope phase argument reaches one."""
    _check_delta(delta)
    v = abs(params.v_z)
    if Form(form) is Form.PRINTED:
        return 4 * v / delta**2
    if params.c_theta == 0:
        return math.inf
    return v / (4 * params.c_theta**2 * delta**2)


def delta_limit_population(
    k0: float,
    params: DimensionlessParams,
    tau: ArrayLike,
    form: Form = Form.RESOLVED,
) -> np.ndarray:
    """ΔN(τ) = 4c_θk₀Ṽ_z sin²(ω_{k₀}τ)/D for a momentum eigenstate.

    ``Form.RESOLVED`` uses D = ω_{k₀}², which the narrow-Gaussian quadrature
    reproduces; ``Form.PRINTED`` uses D = ω_{k₀}.
    """
    tau = np.asarray(tau, dtype=float)
    omega = float(mode_frequency(k0, params))
    if Form(form) is Form.PRINTED:
        _require_unit_coupling(params)
        denominator = omega
    else:
        denominator = omega**2
    if denominator == 0:
        return np.zeros_like(tau)
    return 4 * params.c_theta * k0 * params.v_z / denominator * np.sin(omega * tau) ** 2


def physical_scales(p: PhysicalParams, sigma: float) -> PhysicalScales:
    """Convert the reduced Zitterbewegung scales to laboratory units."""
    if not sigma > 0:
        raise PreconditionError(f"sigma must be positive, got {sigma}", "analytic")
    reduced = reduce_params(p)
    delta = width_to_delta(sigma, p.kappa)
    t_unit = time_unit(p)
    v_z_joules = reduced.v_z * recoil_energy(p)
    scales = PhysicalScales(
        v_z=reduced.v_z,
        delta=delta,
        recoil_velocity=recoil_velocity(p),
        zb_frequency=abs(2 * v_z_joules / p.hbar) / (2 * math.pi),
        damping_onset=damping_onset(reduced, delta) * t_unit,
        damping_onset_printed=damping_onset(reduced, delta, Form.PRINTED) * t_unit,
        time_unit=t_unit,
    )
    logger.debug("Physical scales: %s", scales)
    return scales
