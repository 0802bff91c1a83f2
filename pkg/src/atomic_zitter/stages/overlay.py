import logging
import math
import warnings

import numpy as np

from ..analytic import delta_limit_population, drift, zitter_envelope, zitter_term
from ..config import ScenarioConfig
from ..pipeline.stage import RunContext

logger = logging.getLogger(__name__)

EQUAL_WEIGHT = 1 / math.sqrt(2)


def equal_superposition(spec) -> bool:
    return all(abs(c - EQUAL_WEIGHT) < 1e-12 for c in (spec.c1, spec.c2))


class AnalyticOverlayStage:
    """Compares the numeric trajectories with the closed-form oracles.

    The centre-of-mass oracle needs k0 = 0 and the (1, 1)/√2 spinor; for
    k0 != 0 the population difference is compared with its delta limit.
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config

    def run(self, context: RunContext) -> RunContext:
        spec, params = context.spec, context.params
        if not equal_superposition(spec) or params.v_z == 0 or params.c_theta == 0:
            logger.info("AnalyticOverlayStage: no closed form for this initial state")
            context.record("applicable", False, "analytic")
            return context
        if spec.k0 != 0:
            return self._population_overlay(context)

        ratio = abs(params.v_z) / spec.delta
        enforced = ratio >= self.config.tolerances.analytic_min_ratio
        x_d = drift(context.tau, params, spec.delta)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            x_z = zitter_term(context.tau, params, spec.delta)
        for w in caught:
            logger.warning("AnalyticOverlayStage: %s", w.message)
        amplitude = float(zitter_envelope(0.0, params, spec.delta))
        context.record("applicable", True, "analytic")
        context.record("ratio", ratio, "analytic")
        context.record("enforced", enforced, "analytic")
        context.record("drift_regime", x_d.regime.value, "analytic")
        context.record("drift_slope", x_d.slope, "analytic")
        for limit, series in context.series.items():
            residual = np.max(np.abs(series.centre_of_mass - x_d.x_d - x_z)) / amplitude
            context.record("analytic_residual", float(residual), limit)
            context.overlays[limit] = {"x_d": x_d.x_d, "x_z": x_z}
            logger.info(
                "AnalyticOverlayStage: %s residual %.3g of the ZB amplitude", limit, residual
            )
        return context

    def _population_overlay(self, context: RunContext) -> RunContext:
        spec, params = context.spec, context.params
        limit_curve = delta_limit_population(spec.k0, params, context.tau)
        context.record("applicable", True, "analytic")
        context.record("enforced", False, "analytic")
        for limit, series in context.series.items():
            residual = float(np.max(np.abs(series.delta_n - limit_curve)))
            context.record("delta_limit_residual", residual, limit)
            context.overlays[limit] = {"delta_n_limit": limit_curve}
        return context
