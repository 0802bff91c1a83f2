from abc import abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol

import numpy as np

from ..config import ScenarioConfig
from ..core import DimensionlessParams, GaussianSpec, KGrid, PhysicalParams
from ..observables import ObservableSeries


@dataclass
class RunContext:
    """State shared by the stages of one scenario run."""

    config: ScenarioConfig
    spec: GaussianSpec
    params: DimensionlessParams
    grid: KGrid
    tau: np.ndarray
    physical: Optional[PhysicalParams] = None
    series: Dict[str, ObservableSeries] = field(default_factory=dict)
    overlays: Dict[str, Dict[str, np.ndarray]] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @classmethod
    def from_config(cls, config: ScenarioConfig) -> "RunContext":
        return cls(
            config=config,
            spec=config.gaussian_spec(),
            params=config.dimensionless_params(),
            grid=config.k_grid(),
            tau=config.time.grid(),
            physical=config.physical_params(),
        )

    def record(self, key: str, value: Any, section: Optional[str] = None) -> None:
        target = self.summary if section is None else self.summary.setdefault(section, {})
        target[key] = value

    def fail(self, message: str) -> None:
        self.failures.append(message)

    @property
    def accepted(self) -> bool:
        return not self.failures


class Stage(Protocol):
    """One step of a scenario run; reads and extends the context."""

    @abstractmethod
    def run(self, context: RunContext) -> RunContext:
        ...
