"""Builtin scenario presets and a registry that can be extended from disk."""
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import parse_yaml
from .errors import ConfigError

logger = logging.getLogger(__name__)

_ZB_TRACE = """
state: {k0: 0.0, delta: 0.05}
time: {tau_max: 20.0, samples: 1001}
output:
  kinds: [density_x, com, populations, analytic_overlay]
  density_stride: 5
  x_window: 60.0
"""

# moving packet with the (1, e^{i pi/4})/sqrt(2) spinor
_PHASE_SHIFTED = """
model: {v_z: 1.0, c_theta: 1.0}
state: {k0: 1.0, delta: 0.05, relative_phase: 0.7853981633974483}
time: {tau_max: 20.0, samples: 1001}
output:
  kinds: [density_x, com, populations]
  density_stride: 5
  x_window: 80.0
"""

PRESETS: Dict[str, str] = {
    # full dynamics for a ladder of widths, pure Dirac for reference
    "fig2": """
scenario: {name: fig2, limit: both}
model: {v_z: 1.0, c_theta: 1.0}
state: {k0: 0.0, delta: 0.2}
time: {tau_max: 20.0, samples: 401}
output:
  kinds: [density_x, com]
  density_stride: 4
  x_window: 60.0
""",
    "fig3a": "scenario: {name: fig3a, limit: full}\nmodel: {v_z: 1.0, c_theta: 1.0}\n"
    + _ZB_TRACE,
    "fig3c": "scenario: {name: fig3c, limit: full}\nmodel: {v_z: 3.0, c_theta: 1.0}\n"
    + _ZB_TRACE,
    "fig3ef": "scenario: {name: fig3ef, limit: full}\n" + _PHASE_SHIFTED,
    "fig4a": """
scenario: {name: fig4a, limit: full}
model: {v_z: 1.0, c_theta: 1.0}
state: {k0: 1.0, delta: 0.05}
time: {tau_max: 20.0, samples: 1001}
output:
  kinds: [density_x, com, populations, analytic_overlay]
  density_stride: 5
  x_window: 80.0
""",
    # same packet as fig3ef, read for its component densities and populations
    "fig4b": "scenario: {name: fig4b, limit: full}\n" + _PHASE_SHIFTED,
    # 87Rb on the D2 line, 10 um packet
    "rb87": """
scenario: {name: rb87, limit: dirac}
physical:
  species: rb87
  theta: 0.2
  v1: 3.0
  v3: 0.0
  energy_unit: recoil
  sigma: 1.0e-5
grid: {k_min: -0.25, k_max: 0.25, n: 4096}
time: {tau_max: 400.0, samples: 2001}
output:
  kinds: [com, populations, analytic_overlay]
""",
}

GROUPS: Dict[str, List[str]] = {
    "fig3": ["fig3a", "fig3c", "fig3ef"],
    "fig4": ["fig4a", "fig4b"],
}


class ScenarioRegistry:
    """Serves builtin presets plus any ``*.yaml`` scenarios found in ``extra_dir``."""

    def __init__(self, extra_dir: Optional[Path] = None):
        self.presets: Dict[str, str] = dict(PRESETS)
        self.groups: Dict[str, List[str]] = {k: list(v) for k, v in GROUPS.items()}
        if extra_dir is not None:
            self._load_directory(Path(extra_dir))

    def _load_directory(self, directory: Path) -> None:
        if not directory.is_dir():
            logger.info("Scenario directory %s not found; using builtin presets only", directory)
            return
        for path in sorted(directory.glob("*.yaml")):
            name = path.stem
            if name in self.presets:
                logger.warning("Scenario file %s shadows builtin preset '%s'", path, name)
            self.presets[name] = path.read_text(encoding="utf-8")
            logger.debug("Registered scenario '%s' from %s", name, path)

    def names(self) -> List[str]:
        return sorted(self.presets) + sorted(self.groups)

    def expand(self, name: str) -> List[str]:
        """Member presets of a group, or ``[name]`` for a single preset."""
        if name in self.groups:
            return list(self.groups[name])
        if name in self.presets:
            return [name]
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(self.names())}")

    def get(self, name: str) -> Dict[str, Any]:
        if name not in self.presets:
            raise ConfigError(
                f"unknown scenario {name!r}; choose from {', '.join(sorted(self.presets))}"
            )
        return parse_yaml(self.presets[name], f"scenario {name}")
