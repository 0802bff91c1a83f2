import logging

from ..config import ScenarioConfig
from ..pipeline.stage import RunContext

logger = logging.getLogger(__name__)


class ToleranceReviewStage:
    """
    Accepts or rejects a run by comparing the recorded residuals with the
    configured tolerances.
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config

    def run(self, context: RunContext) -> RunContext:
        tolerances = self.config.tolerances
        checks = [
            ("norm_drift", tolerances.norm_drift),
            ("population_error", tolerances.population_sum),
            ("density_x_integral_error", tolerances.density_integral),
            ("density_k_integral_error", tolerances.density_integral),
            ("zb_frequency_error", tolerances.zb_frequency),
            ("rabi_frequency_error", tolerances.rabi_frequency),
        ]
        if context.summary.get("analytic", {}).get("enforced"):
            checks.append(("analytic_residual", tolerances.analytic_residual))

        for limit in context.series:
            recorded = context.summary.get(limit, {})
            for key, tolerance in checks:
                value = recorded.get(key)
                if value is None:
                    continue
                if not value <= tolerance:
                    context.fail(f"{limit}.{key} = {value:.3g} exceeds tolerance {tolerance:.3g}")

        if context.accepted:
            logger.info("ToleranceReviewStage: all residuals within tolerance")
        else:
            for failure in context.failures:
                logger.error("ToleranceReviewStage: %s", failure)
        context.record("accepted", context.accepted)
        context.record("failures", list(context.failures))
        return context
