"""Fast in-process invariant checks behind ``atomic-zitter selftest``."""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from .analytic import erfc
from .core import DimensionlessParams, GaussianSpec, make_k_grid, sample_gaussian, to_position
from .evolve import Limit, mode_propagator, propagate
from .observables import populations
from .tripod import (
    connection_numeric,
    dark_states,
    interaction_hamiltonian,
    scalar_potential_numeric,
    scalar_potentials,
    vector_potential,
)
from .twolevel import TwoLevelParams, max_transfer, rabi_frequency

logger = logging.getLogger(__name__)

SEED = 20240607


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class SelftestReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict[str, Dict[str, object]]:
        return {r.name: {"passed": r.passed, "detail": r.detail} for r in self.results}


def _bounded(name: str, value: float, tolerance: float) -> CheckResult:
    return CheckResult(name, bool(value <= tolerance), f"{value:.3g} <= {tolerance:.1g}")


def check_unitarity(grid_n: int = 4096) -> CheckResult:
    grid = make_k_grid(n=grid_n)
    state = sample_gaussian(GaussianSpec.superposition(0.0, 0.05), grid)
    params = DimensionlessParams(v_z=1.0)
    drift = max(
        abs(propagate(state, tau, params, limit).norm() - state.norm())
        for limit in Limit
        for tau in (1.0, 10.0, 100.0)
    )
    return _bounded("unitarity", drift, 1e-12)


def check_composition() -> CheckResult:
    params = DimensionlessParams(v_z=1.3, c_theta=0.8)
    k = np.linspace(-3.0, 3.0, 61)
    error = 0.0
    for limit in Limit:
        u1 = mode_propagator(k, 0.7, params, limit)
        u2 = mode_propagator(k, 1.9, params, limit)
        u12 = mode_propagator(k, 2.6, params, limit)
        error = max(error, float(np.max(np.abs(np.einsum("ijn,jkn->ikn", u1, u2) - u12))))
    return _bounded("composition", error, 1e-12)


def check_parity(grid_n: int = 4096) -> CheckResult:
    grid = make_k_grid(n=grid_n)
    state = sample_gaussian(GaussianSpec.superposition(0.0, 0.05), grid)
    evolved = propagate(state, 7.5, DimensionlessParams(v_z=1.0))
    # nodes k_j and k_{n-1-j} mirror each other
    rho = evolved.density
    error = float(np.max(np.abs(rho - rho[::-1])))
    return _bounded("parity", error, 1e-12)


def check_gauge(samples: int = 20) -> CheckResult:
    rng = np.random.default_rng(SEED)
    kappa, mass, hbar, step = 1.0, 0.5, 1.0, 1e-5
    error = 0.0
    for _ in range(samples):
        theta = rng.uniform(0.0, math.pi / 2)
        x, y = rng.uniform(-5.0, 5.0, size=2)
        states = dark_states(theta, kappa, x, y)
        a = connection_numeric(states, step, "x", hbar=hbar)
        phi_numeric = scalar_potential_numeric(states, step, mass, hbar=hbar)
        phi, _ = scalar_potentials(theta, kappa, 0.0, 0.0, mass, hbar=hbar)
        error = max(
            error,
            float(np.max(np.abs(a - vector_potential(theta, kappa, hbar).matrix))),
            float(np.max(np.abs(phi_numeric - phi))),
        )
    return _bounded("gauge", error, 1e-8)


def check_dark_states() -> CheckResult:
    rng = np.random.default_rng(SEED + 1)
    error = 0.0
    for _ in range(10):
        theta = rng.uniform(0.0, math.pi / 2)
        x, y = rng.uniform(-5.0, 5.0, size=2)
        states = dark_states(theta, 1.0, x, y)
        h = interaction_hamiltonian(theta, 1.0, x, y)
        gram = states.vectors.conj() @ states.vectors.T
        error = max(
            error,
            float(np.max(np.abs(h @ states.embedded().T))),
            float(np.max(np.abs(gram - np.eye(2)))),
        )
    return _bounded("dark_states", error, 1e-12)


def check_erfc_symmetry() -> CheckResult:
    x = np.linspace(-6.0, 6.0, 241)
    error = float(np.max(np.abs(erfc(x) + erfc(-x) - 2.0)))
    return _bounded("erfc_symmetry", error, 1e-14)


def check_rabi() -> CheckResult:
    p = TwoLevelParams(omega_tilde=4.0, vz1=3.0, vz2=-3.0)
    error = max(abs(rabi_frequency(p) - 5.0), abs(max_transfer(p) - 16 / 25))
    return _bounded("rabi_3_4_5", error, 1e-14)


def check_parseval(grid_n: int = 4096) -> CheckResult:
    grid = make_k_grid(n=grid_n)
    state = sample_gaussian(GaussianSpec.superposition(0.7, 0.1, math.pi / 3), grid)
    evolved = propagate(state, 3.0, DimensionlessParams(v_z=1.0))
    error = abs(to_position(evolved).norm() - evolved.norm())
    return _bounded("parseval", error, 1e-10)


def check_no_transfer(grid_n: int = 4096) -> CheckResult:
    grid = make_k_grid(n=grid_n)
    state = sample_gaussian(GaussianSpec.superposition(0.0, 0.05), grid)
    params = DimensionlessParams(v_z=1.0)
    error = 0.0
    for tau in np.linspace(0.0, 20.0, 41):
        n1, n2 = populations(propagate(state, float(tau), params))
        error = max(error, abs(n1 - n2))
    return _bounded("no_transfer", error, 1e-10)


CHECKS: Dict[str, Callable[[], CheckResult]] = {
    "unitarity": check_unitarity,
    "composition": check_composition,
    "parity": check_parity,
    "gauge": check_gauge,
    "dark_states": check_dark_states,
    "erfc_symmetry": check_erfc_symmetry,
    "rabi_3_4_5": check_rabi,
    "parseval": check_parseval,
    "no_transfer": check_no_transfer,
}


def run_selftest() -> SelftestReport:
    report = SelftestReport()
    for name, check in CHECKS.items():
        try:
            result = check()
        except Exception as e:
            logger.exception("Selftest check '%s' raised: %s", name, e)
            result = CheckResult(name, False, f"raised {type(e).__name__}: {e}")
        status = "ok" if result.passed else "FAILED"
        logger.info("selftest %s: %s (%s)", name, status, result.detail)
        report.results.append(result)
    return report
