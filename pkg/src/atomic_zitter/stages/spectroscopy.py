import logging
import math
from typing import Optional

import numpy as np

from ..analysis import breakdown_time, first_period, fit_linear_drift, zero_crossing_frequency
from ..analytic import physical_scales
from ..config import ScenarioConfig
from ..core import sample_gaussian
from ..errors import PreconditionError, ZitterError
from ..pipeline.stage import RunContext
from ..twolevel import TwoLevelParams, max_transfer, rabi_frequency, reduce_state

logger = logging.getLogger(__name__)

FLAT_POPULATION = 1e-8


class SpectroscopyStage:
    """Extracts oscillation frequencies from the evolved series."""

    def __init__(self, config: ScenarioConfig):
        self.config = config

    def run(self, context: RunContext) -> RunContext:
        zb_expected = 2 * abs(context.params.v_z)
        context.record("zb_frequency_expected", zb_expected, "spectroscopy")
        gate_zb = bool(context.summary.get("analytic", {}).get("enforced")) and zb_expected > 0
        reduced = self._two_level(context)
        tolerances = self.config.tolerances
        omega_r = None
        if reduced is not None and max_transfer(reduced) >= tolerances.rabi_min_transfer:
            omega_r = rabi_frequency(reduced)

        for limit, series in context.series.items():
            overlay = context.overlays.get(limit, {})
            if "x_d" in overlay:
                oscillation = series.centre_of_mass - overlay["x_d"]
            else:
                slope, intercept = fit_linear_drift(series.tau, series.centre_of_mass)
                oscillation = series.centre_of_mass - (slope * series.tau + intercept)
            zb_frequency = self._frequency(series.tau, oscillation)
            context.record("zb_frequency", zb_frequency, limit)
            context.record("breakdown_time", breakdown_time(series.tau, oscillation), limit)
            if gate_zb:
                error = math.inf if zb_frequency is None else abs(zb_frequency / zb_expected - 1)
                context.record("zb_frequency_error", error, limit)

            delta_n = series.delta_n
            population_frequency = None
            if np.ptp(delta_n) > FLAT_POPULATION:
                try:
                    population_frequency = math.pi / first_period(series.tau, delta_n)
                    context.record("population_frequency", population_frequency, limit)
                except PreconditionError as e:
                    logger.info("SpectroscopyStage: no population period (%s)", e)
            if omega_r is not None:
                error = (
                    math.inf
                    if population_frequency is None
                    else abs(population_frequency / omega_r - 1)
                )
                context.record("rabi_frequency_error", error, limit)

        if context.physical is not None:
            self._physical(context)
        return context

    @staticmethod
    def _frequency(tau, oscillation):
        try:
            return zero_crossing_frequency(tau, oscillation)
        except PreconditionError as e:
            logger.info("SpectroscopyStage: no zero-crossing frequency (%s)", e)
            return None

    def _two_level(self, context: RunContext) -> Optional[TwoLevelParams]:
        try:
            reduced, _ = reduce_state(sample_gaussian(context.spec, context.grid), context.params)
        except ZitterError as e:
            logger.warning("SpectroscopyStage: two-level reduction failed: %s", e)
            return None
        context.record("rabi_frequency", rabi_frequency(reduced), "spectroscopy")
        context.record("max_transfer", max_transfer(reduced), "spectroscopy")
        context.record(
            "omega_tilde", [reduced.omega_tilde.real, reduced.omega_tilde.imag], "spectroscopy"
        )
        return reduced

    def _physical(self, context: RunContext) -> None:
        p = context.physical
        sigma = self.config.physical.sigma
        if sigma is None:
            # invert width_to_delta
            sigma = math.sqrt(2) / (context.spec.delta * p.kappa)
        scales = physical_scales(p, sigma)
        context.record("v_z", scales.v_z, "physical")
        context.record("delta", scales.delta, "physical")
        context.record("sigma_m", sigma, "physical")
        context.record("recoil_velocity_m_s", scales.recoil_velocity, "physical")
        context.record("zb_frequency_hz", scales.zb_frequency, "physical")
        context.record("damping_onset_s", scales.damping_onset, "physical")
        context.record("damping_onset_printed_s", scales.damping_onset_printed, "physical")
        context.record("time_unit_s", scales.time_unit, "physical")
        for limit, series in context.series.items():
            omega = context.summary.get(limit, {}).get("zb_frequency")
            if omega is not None:
                context.record(
                    "zb_frequency_hz", omega / (2 * math.pi * scales.time_unit), limit
                )
        logger.info(
            "SpectroscopyStage: f_ZB = %.4g Hz, damping onset %.4g s",
            scales.zb_frequency,
            scales.damping_onset,
        )
