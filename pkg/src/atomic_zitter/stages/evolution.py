import logging

import numpy as np

from ..config import ScenarioConfig
from ..observables import observe
from ..pipeline.stage import RunContext

logger = logging.getLogger(__name__)


class EvolutionStage:
    """Propagates the initial packet in every requested limit."""

    def __init__(self, config: ScenarioConfig):
        self.config = config

    def run(self, context: RunContext) -> RunContext:
        kinds = set(self.config.output.kinds)
        spaces = [space for space in ("x", "k") if f"density_{space}" in kinds]
        for limit in self.config.limits():
            logger.info(
                "EvolutionStage: %s limit, %d samples to tau=%g",
                limit.value,
                len(context.tau),
                context.tau[-1],
            )
            series = observe(
                context.spec,
                context.params,
                context.tau,
                context.grid,
                limit,
                densities=spaces,
                density_stride=self.config.output.density_stride,
            )
            context.series[limit.value] = series
            context.record("norm_drift", series.norm_drift(), limit.value)
            context.record("population_error", series.population_error(), limit.value)
            for space, density in series.densities.items():
                error = float(np.max(np.abs(density.row_integrals() - 1.0)))
                context.record(f"density_{space}_integral_error", error, limit.value)
        return context
