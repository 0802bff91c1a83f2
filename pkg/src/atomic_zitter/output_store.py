import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np

from .core import PhysicalParams, length_unit, time_unit
from .observables import DensityMap, ObservableSeries

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12e"

TAU = "tau [2m/(hbar kappa^2)]"
X = "x [1/kappa]"
K = "k [kappa]"
T_S = "t [s]"
X_M = "x [m]"


def jsonable(value: Any) -> Any:
    """Plain JSON types for summaries; complex numbers become ``[re, im]``."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


class OutputStore:
    """
    Writes the data files of scenario runs and limit comparisons.
    Every run gets its own subdirectory named after the scenario.
    """

    def __init__(self, directory: str):
        self.directory = Path(directory)

    def _run_dir(self, name: str) -> Path:
        path = self.directory / name
        path.mkdir(parents=True, exist_ok=True)
        return path

    def write_table(self, path: Path, columns: Dict[str, np.ndarray]) -> Path:
        """CSV with a header line naming columns and units."""
        data = np.column_stack([np.asarray(v, dtype=float) for v in columns.values()])
        np.savetxt(
            path,
            data,
            fmt=FLOAT_FORMAT,
            delimiter=",",
            header=",".join(columns),
            comments="",
        )
        logger.debug("Wrote %d rows to %s", len(data), path)
        return path

    def write_summary(self, path: Path, summary: Dict[str, Any]) -> Path:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(jsonable(summary), f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    def write_run(
        self,
        name: str,
        kinds: Sequence[str],
        series: Dict[str, ObservableSeries],
        overlays: Dict[str, Dict[str, np.ndarray]],
        summary: Dict[str, Any],
        physical: Optional[PhysicalParams] = None,
        x_window: Optional[float] = None,
        k_window: Optional[float] = None,
    ) -> List[Path]:
        run_dir = self._run_dir(name)
        files: List[Path] = []
        for limit, observed in series.items():
            suffix = f"_{limit}" if len(series) > 1 else ""
            if "com" in kinds:
                columns = self._with_time(physical, {TAU: observed.tau})
                columns["x_com [1/kappa]"] = observed.centre_of_mass
                if physical is not None:
                    columns["x_com [m]"] = observed.centre_of_mass * length_unit(physical)
                files.append(self.write_table(run_dir / f"com{suffix}.csv", columns))
            if "populations" in kinds:
                columns = self._with_time(physical, {TAU: observed.tau})
                columns.update({"N1": observed.n1, "N2": observed.n2, "delta_N": observed.delta_n})
                files.append(self.write_table(run_dir / f"populations{suffix}.csv", columns))
            for space, density in observed.densities.items():
                window = x_window if space == "x" else k_window
                columns = self._density_columns(density, window, physical)
                path = run_dir / f"density_{space}{suffix}.csv"
                files.append(self.write_table(path, columns))
            overlay = overlays.get(limit)
            if "analytic_overlay" in kinds and overlay:
                columns = {TAU: observed.tau}
                if "x_d" in overlay:
                    columns["x_com [1/kappa]"] = observed.centre_of_mass
                    columns["x_d [1/kappa]"] = overlay["x_d"]
                    columns["x_z [1/kappa]"] = overlay["x_z"]
                    columns["residual [1/kappa]"] = (
                        observed.centre_of_mass - overlay["x_d"] - overlay["x_z"]
                    )
                if "delta_n_limit" in overlay:
                    columns["delta_N"] = observed.delta_n
                    columns["delta_N_limit"] = overlay["delta_n_limit"]
                path = run_dir / f"analytic_overlay{suffix}.csv"
                files.append(self.write_table(path, columns))
        files.append(self.write_summary(run_dir / "summary.json", summary))
        logger.info("Wrote %d files to %s", len(files), run_dir)
        return files

    @staticmethod
    def _with_time(
        physical: Optional[PhysicalParams], columns: Dict[str, np.ndarray]
    ) -> Dict[str, np.ndarray]:
        if physical is not None:
            columns[T_S] = columns[TAU] * time_unit(physical)
        return columns

    @staticmethod
    def _density_columns(
        density: DensityMap, window: Optional[float], physical: Optional[PhysicalParams]
    ) -> Dict[str, np.ndarray]:
        # long format: one row per (tau, node)
        keep = np.ones(len(density.axis), dtype=bool)
        if window is not None:
            keep = np.abs(density.axis) <= window
        axis = density.axis[keep]
        components = density.components[:, :, keep]
        tau = np.repeat(density.tau, len(axis))
        nodes = np.tile(axis, len(density.tau))
        columns: Dict[str, np.ndarray] = {TAU: tau, X if density.space == "x" else K: nodes}
        if physical is not None:
            columns[T_S] = tau * time_unit(physical)
            if density.space == "x":
                columns[X_M] = nodes * length_unit(physical)
        columns["rho"] = components.sum(axis=1).ravel()
        columns["rho1"] = components[:, 0, :].ravel()
        columns["rho2"] = components[:, 1, :].ravel()
        return columns

    def write_compare(
        self,
        name: str,
        deltas: Sequence[float],
        residuals: Sequence[float],
        metadata: Dict[str, Any],
    ) -> List[Path]:
        run_dir = self._run_dir(name)
        deltas = np.asarray(deltas, dtype=float)
        columns = {
            "delta [kappa]": deltas,
            "sigma_equivalent [1/kappa]": np.sqrt(2) / deltas,
            "max_density_residual [kappa]": np.asarray(residuals, dtype=float),
        }
        files = [self.write_table(run_dir / "compare.csv", columns)]
        files.append(self.write_summary(run_dir / "compare.json", metadata))
        return files
