import cmath
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .core import (
    DimensionlessParams,
    GaussianSpec,
    KGrid,
    PhysicalParams,
    make_k_grid,
    recoil_energy,
    reduce_params,
    sample_gaussian,
    width_to_delta,
)
from .core.params import RB87_D2_WAVELENGTH, RB87_MASS
from .errors import ConfigError, ZitterError
from .evolve import Limit

logger = logging.getLogger(__name__)

OutputKind = Literal["density_x", "density_k", "com", "populations", "analytic_overlay"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class ScenarioSection(_Section):
    name: str = Field("custom", description="Scenario label used in output metadata.")
    limit: Literal["full", "dirac", "both"] = Field(
        "full", description="Which Hamiltonian to evolve with."
    )


class StateSection(_Section):
    k0: float = Field(0.0, description="Centre momentum in units of kappa.")
    delta: float = Field(0.05, gt=0, description="Momentum width in units of kappa.")
    c1: Tuple[float, float] = Field(
        (1 / math.sqrt(2), 0.0), description="Weight of dark state 1 as [re, im]."
    )
    c2: Tuple[float, float] = Field(
        (1 / math.sqrt(2), 0.0), description="Weight of dark state 2 as [re, im]."
    )
    relative_phase: Optional[float] = Field(
        None,
        description="If set, use the spinor (1, exp(i*phase))/sqrt(2) instead of c1/c2.",
    )
    normalize: bool = Field(False, description="Rescale c1, c2 to unit weight.")

    @model_validator(mode="after")
    def _check_weights(self) -> "StateSection":
        weight = sum(re * re + im * im for re, im in (self.c1, self.c2))
        if self.relative_phase is None and not self.normalize and abs(weight - 1) > 1e-12:
            raise ValueError(
                f"|c1|^2 + |c2|^2 = {weight:.15g}; set normalize: true to rescale"
            )
        if weight == 0:
            raise ValueError("c1 and c2 cannot both vanish")
        return self

    def weights(self) -> Tuple[complex, complex]:
        if self.relative_phase is not None:
            w = 1 / math.sqrt(2)
            return complex(w), w * cmath.exp(1j * self.relative_phase)
        c1, c2 = complex(*self.c1), complex(*self.c2)
        scale = math.sqrt(abs(c1) ** 2 + abs(c2) ** 2)
        return c1 / scale, c2 / scale


class ModelSection(_Section):
    v_z: float = Field(1.0, description="Gap V_z in units of hbar^2 kappa^2 / 2m.")
    c_theta: float = Field(1.0, ge=0, le=1, description="Coupling scale cos(theta).")


class PhysicalSection(_Section):
    species: Literal["rb87", "custom"] = Field("rb87", description="Atom preset.")
    mass: Optional[float] = Field(None, gt=0, description="Atomic mass in kg.")
    wavelength: Optional[float] = Field(None, gt=0, description="Laser wavelength in m.")
    kappa: Optional[float] = Field(None, gt=0, description="Laser wave number in 1/m.")
    theta: float = Field(..., ge=0, le=math.pi / 2, description="Mixing angle in rad.")
    v1: float = Field(0.0, description="Trap potential of states 1 and 2.")
    v3: float = Field(0.0, description="Trap potential of state 3.")
    energy_unit: Literal["joule", "recoil"] = Field(
        "recoil", description="Unit of v1 and v3."
    )
    sigma: Optional[float] = Field(
        None, gt=0, description="Position width in m; overrides state.delta."
    )

    @model_validator(mode="after")
    def _check_species(self) -> "PhysicalSection":
        if self.species == "custom" and (
            self.mass is None or (self.kappa is None and self.wavelength is None)
        ):
            raise ValueError("custom species needs mass and kappa or wavelength")
        return self

    def to_params(self) -> PhysicalParams:
        mass = self.mass if self.mass is not None else RB87_MASS
        if self.kappa is not None:
            kappa = self.kappa
        else:
            kappa = 2 * math.pi / (self.wavelength or RB87_D2_WAVELENGTH)
        bare = PhysicalParams(mass=mass, kappa=kappa, theta=self.theta, v1=0.0, v3=0.0)
        unit = recoil_energy(bare) if self.energy_unit == "recoil" else 1.0
        return PhysicalParams(
            mass=mass, kappa=kappa, theta=self.theta, v1=self.v1 * unit, v3=self.v3 * unit
        )


class TimeSection(_Section):
    tau_max: float = Field(20.0, gt=0, description="Final reduced time.")
    samples: int = Field(1001, ge=3, description="Number of output times including 0.")

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.samples)


class GridSection(_Section):
    k_min: float = Field(-8.0, description="Lower momentum bound.")
    k_max: float = Field(8.0, description="Upper momentum bound.")
    n: int = Field(4096, ge=2, description="Number of momentum nodes.")


class OutputSection(_Section):
    directory: str = Field("results", description="Directory for data files.")
    kinds: List[OutputKind] = Field(
        ["com", "populations", "analytic_overlay"], description="Files to write."
    )
    density_stride: int = Field(10, ge=1, description="Keep every n-th time in maps.")
    x_window: Optional[float] = Field(
        200.0, gt=0, description="Only write |x| <= x_window in density_x."
    )
    k_window: Optional[float] = Field(
        None, gt=0, description="Only write |k| <= k_window in density_k."
    )


class CompareSection(_Section):
    deltas: List[float] = Field(
        [0.4, 0.2, 0.1, 0.05], min_length=2, description="Width ladder for compare."
    )
    tau_max: float = Field(5.0, gt=0, description="Final time of the comparison.")
    samples: int = Field(51, ge=2, description="Comparison times including 0.")


class ToleranceSection(_Section):
    norm_drift: float = Field(1e-10, gt=0)
    population_sum: float = Field(1e-10, gt=0)
    density_integral: float = Field(1e-10, gt=0)
    analytic_residual: float = Field(
        1e-2, gt=0, description="Relative to the Zitterbewegung amplitude."
    )
    analytic_min_ratio: float = Field(
        10.0, gt=0, description="Smallest v_z/delta at which the oracle residual is enforced."
    )
    zb_frequency: float = Field(
        5e-3, gt=0, description="Relative error of the ZB frequency against 2|v_z|."
    )
    rabi_frequency: float = Field(
        2e-2, gt=0, description="Relative error of the population frequency against omega_R."
    )
    rabi_min_transfer: float = Field(
        0.1, ge=0, le=1, description="Smallest two-level transfer at which omega_R is enforced."
    )


class StageConfig(_Section):
    module: str = Field(..., description="Import path of the stage module.")
    class_name: str = Field(..., alias="class", description="Stage class name.")


class LoggingConfig(_Section):
    level: str = Field("INFO", description="Logging level (DEBUG, INFO, WARNING, ...).")
    format: Literal["json", "plain"] = Field("json", description="Log line format.")
    log_file: Optional[str] = Field(None, description="Optional log file path.")


DEFAULT_PIPELINE = [
    {"module": "atomic_zitter.stages.evolution", "class": "EvolutionStage"},
    {"module": "atomic_zitter.stages.overlay", "class": "AnalyticOverlayStage"},
    {"module": "atomic_zitter.stages.spectroscopy", "class": "SpectroscopyStage"},
    {"module": "atomic_zitter.stages.review", "class": "ToleranceReviewStage"},
]


class ScenarioConfig(_Section):
    """Complete description of one simulation run."""

    version: Literal[1] = Field(1, description="Configuration schema version.")
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    state: StateSection = Field(default_factory=StateSection)
    model: ModelSection = Field(default_factory=ModelSection)
    physical: Optional[PhysicalSection] = Field(
        None, description="Laboratory parameters; overrides model and state.delta."
    )
    time: TimeSection = Field(default_factory=TimeSection)
    grid: GridSection = Field(default_factory=GridSection)
    output: OutputSection = Field(default_factory=OutputSection)
    compare: CompareSection = Field(default_factory=CompareSection)
    tolerances: ToleranceSection = Field(default_factory=ToleranceSection)
    pipeline: List[StageConfig] = Field(
        default_factory=lambda: [StageConfig(**s) for s in DEFAULT_PIPELINE]
    )
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    def physical_params(self) -> Optional[PhysicalParams]:
        return self.physical.to_params() if self.physical else None

    def dimensionless_params(self) -> DimensionlessParams:
        physical = self.physical_params()
        if physical is not None:
            return reduce_params(physical)
        return DimensionlessParams(v_z=self.model.v_z, c_theta=self.model.c_theta)

    def gaussian_spec(self, delta: Optional[float] = None) -> GaussianSpec:
        if delta is None:
            delta = self.state.delta
            if self.physical is not None and self.physical.sigma is not None:
                delta = width_to_delta(self.physical.sigma, self.physical_params().kappa)
        c1, c2 = self.state.weights()
        return GaussianSpec(self.state.k0, delta, c1, c2)

    def k_grid(self) -> KGrid:
        return make_k_grid(self.grid.k_min, self.grid.k_max, self.grid.n)

    def limits(self) -> List[Limit]:
        if self.scenario.limit == "both":
            return [Limit.FULL, Limit.DIRAC]
        return [Limit(self.scenario.limit)]


def _merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def parse_yaml(text: str, source: str = "<string>") -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"invalid YAML in {source}{where}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source} must contain a mapping, got {type(data).__name__}")
    return data


def apply_override(data: Dict[str, Any], assignment: str) -> Dict[str, Any]:
    """Apply one ``section.key=value`` override; the value is parsed as YAML."""
    key, sep, raw = assignment.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override must look like section.key=value, got {assignment!r}")
    value = parse_yaml(f"v: {raw}", f"--set {assignment}")["v"] if raw.strip() else None
    node: Dict[str, Any] = {}
    path = key.strip().split(".")
    cursor = node
    for part in path[:-1]:
        cursor = cursor.setdefault(part, {})
    cursor[path[-1]] = value
    return _merge(data, node)


def _describe(e: ValidationError) -> str:
    lines = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return "; ".join(lines)


def build_config(data: Dict[str, Any], source: str = "<config>") -> ScenarioConfig:
    try:
        config = ScenarioConfig.model_validate(data)
        # module preconditions (grid bounds, spinor weights, truncation) surface here
        sample_gaussian(config.gaussian_spec(), config.k_grid())
        config.dimensionless_params()
    except ValidationError as e:
        raise ConfigError(f"invalid configuration in {source}: {_describe(e)}") from e
    except ZitterError as e:
        raise ConfigError(f"invalid configuration in {source}: {e}") from e
    return config


def load_config(
    path: Optional[Path] = None,
    scenario: Optional[str] = None,
    overrides: Iterable[str] = (),
) -> ScenarioConfig:
    """Build a config from a builtin scenario, a YAML file and ``--set`` overrides.

    Later sources win.
    """
    from .scenarios import ScenarioRegistry

    data: Dict[str, Any] = {}
    if scenario:
        data = ScenarioRegistry().get(scenario)
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found at {path.absolute()}")
        data = _merge(data, parse_yaml(path.read_text(encoding="utf-8"), str(path)))
    for assignment in overrides:
        data = apply_override(data, assignment)
    source = str(path) if path is not None else (scenario or "<defaults>")
    config = build_config(data, source)
    logger.debug("Loaded configuration %s from %s", config.scenario.name, source)
    return config
