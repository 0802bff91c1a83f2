import logging
from dataclasses import dataclass, field
from importlib import import_module
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..config import ScenarioConfig, StageConfig
from ..core import sample_gaussian
from ..errors import ConfigError, ToleranceError
from ..evolve import Limit
from ..observables import density_map
from ..output_store import OutputStore
from .stage import RunContext, Stage

COMPARE_NOTE = (
    "width ladder is an artifact choice: the reference widths are not given numerically"
)


@dataclass
class RunReport:
    scenario: str
    summary: Dict[str, Any]
    files: List[Path] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.failures

    def raise_for_failures(self) -> None:
        if self.failures:
            raise ToleranceError(
                f"{self.scenario}: {len(self.failures)} tolerance failure(s): "
                + "; ".join(self.failures)
            )


@dataclass
class CompareReport:
    scenario: str
    deltas: List[float]
    residuals: List[float]
    files: List[Path] = field(default_factory=list)

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.residuals, self.residuals[1:]))

    def raise_for_failures(self) -> None:
        if not self.decreasing:
            raise ToleranceError(
                f"{self.scenario}: full-vs-Dirac residual not strictly decreasing "
                f"along the width ladder: {self.residuals}"
            )


class ScenarioEngine:
    """
    Runs one scenario through the configured stages and writes its
    data files.
    """

    logger = logging.getLogger(__name__)

    def __init__(self, config: ScenarioConfig, store: Optional[OutputStore] = None):
        self.config = config
        self.store = store or OutputStore(config.output.directory)
        self.stages = self._load_stages(config.pipeline)

    def _load_stages(self, stage_configs: List[StageConfig]) -> List[Stage]:
        """Imports and instantiates the stages named in the pipeline section."""
        loaded: List[Stage] = []
        for stage_conf in stage_configs:
            try:
                module = import_module(stage_conf.module)
                stage_class = getattr(module, stage_conf.class_name)
                loaded.append(stage_class(self.config))
            except (ImportError, AttributeError, TypeError) as e:
                self.logger.exception(
                    "Error loading stage '%s' from module '%s': %s",
                    stage_conf.class_name,
                    stage_conf.module,
                    e,
                )
                raise ConfigError(
                    f"cannot load stage {stage_conf.module}.{stage_conf.class_name}: {e}"
                ) from e
        return loaded

    def _describe(self, context: RunContext) -> None:
        spec, params = context.spec, context.params
        context.record("scenario", self.config.scenario.name)
        context.record("limit", self.config.scenario.limit)
        context.record(
            "parameters",
            {
                "v_z": params.v_z,
                "c_theta": params.c_theta,
                "k0": spec.k0,
                "delta": spec.delta,
                "c1": spec.c1,
                "c2": spec.c2,
                "grid": {
                    "k_min": context.grid.k_min,
                    "k_max": context.grid.k_max,
                    "n": context.grid.n,
                },
                "tau_max": float(context.tau[-1]),
                "samples": len(context.tau),
            },
        )

    def run_scenario(self) -> RunReport:
        """Runs every configured stage and writes the requested files.

        Returns:
            RunReport with the summary, the written files and any tolerance
            failures recorded by the review stage.
        """
        name = self.config.scenario.name
        self.logger.info("Starting scenario '%s'", name)
        context = RunContext.from_config(self.config)
        self._describe(context)
        for stage in self.stages:
            context = stage.run(context)
        output = self.config.output
        files = self.store.write_run(
            name,
            output.kinds,
            context.series,
            context.overlays,
            context.summary,
            physical=context.physical,
            x_window=output.x_window,
            k_window=output.k_window,
        )
        report = RunReport(name, context.summary, files, list(context.failures))
        self.logger.info(
            "Scenario '%s' %s", name, "accepted" if report.accepted else "rejected"
        )
        return report

    def compare_limits(self) -> CompareReport:
        """Compares full and Dirac evolution along the configured width ladder.

        Returns:
            CompareReport holding, for each width, the largest difference of the
            position densities over the comparison times.

        Raises:
            TruncationError: If a width of the ladder does not fit the grid.
        """
        name = self.config.scenario.name
        compare = self.config.compare
        tau = np.linspace(0.0, compare.tau_max, compare.samples)
        params = self.config.dimensionless_params()
        grid = self.config.k_grid()
        residuals: List[float] = []
        for delta in compare.deltas:
            spec = self.config.gaussian_spec(delta)
            # fail early when the ladder outgrows the grid
            sample_gaussian(spec, grid)
            maps = {
                limit: density_map(spec, params, tau, "x", grid, limit)
                for limit in (Limit.FULL, Limit.DIRAC)
            }
            residual = float(np.max(np.abs(maps[Limit.FULL].values - maps[Limit.DIRAC].values)))
            residuals.append(residual)
            self.logger.info("compare '%s': delta=%g residual=%.4g", name, delta, residual)

        report = CompareReport(name, list(compare.deltas), residuals)
        metadata = {
            "scenario": name,
            "deltas": report.deltas,
            "residuals": residuals,
            "decreasing": report.decreasing,
            "tau_max": compare.tau_max,
            "samples": compare.samples,
            "note": COMPARE_NOTE,
        }
        report.files = self.store.write_compare(name, report.deltas, residuals, metadata)
        return report
