import json
import logging
import sys
import warnings
from datetime import datetime
from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from .analytic import (
    Form,
    damping_onset,
    delta_limit_population,
    drift,
    optimal_terms,
    physical_scales,
    zitter_envelope,
    zitter_term,
)
from .config import LoggingConfig, ScenarioConfig, load_config
from .errors import ConfigError, ToleranceError, ZitterError
from .invariants import run_selftest
from .output_store import TAU, OutputStore, jsonable
from .pipeline import ScenarioEngine
from .scenarios import ScenarioRegistry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3

app = typer.Typer(help="Atomic Zitterbewegung simulator with analytic oracles.")


class JsonFormatter(logging.Formatter):
    """Formats log records as one JSON object per line."""

    def format(self, record):
        log_record = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            log_record["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info:
            log_record["stack_info"] = self.formatStack(record.stack_info)
        return json.dumps(log_record)


def _setup_logging(log_config: LoggingConfig) -> None:
    """Configures the root logger from the logging section."""
    log_level = getattr(logging, log_config.level.upper(), logging.INFO)
    if not isinstance(log_level, int):
        log_level = logging.INFO

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    if log_config.format == "json":
        formatter: logging.Formatter = JsonFormatter()
    else:
        formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s")

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if log_config.log_file:
        log_file_path = Path(log_config.log_file)
        log_file_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    logger.debug(
        "Logging configured to level '%s' with format '%s'",
        log_config.level,
        log_config.format,
    )


def _exit_for(e: ZitterError) -> typer.Exit:
    if isinstance(e, ConfigError):
        logger.error("Configuration error: %s", e)
        return typer.Exit(code=EXIT_CONFIG)
    logger.error("Run failed: %s", e)
    return typer.Exit(code=EXIT_TOLERANCE)


def _load_configs(
    config_path: Optional[Path],
    scenario: Optional[str],
    out: Optional[Path],
    grid_n: Optional[int],
    overrides: Optional[List[str]],
    verbose: bool,
) -> List[ScenarioConfig]:
    """Resolve presets (groups expand to several runs), file and overrides."""
    _setup_logging(LoggingConfig(level="DEBUG" if verbose else "INFO"))
    assignments = list(overrides or [])
    if grid_n is not None:
        assignments.append(f"grid.n={grid_n}")
    try:
        names = ScenarioRegistry().expand(scenario) if scenario else [None]
        configs = [load_config(config_path, name, assignments) for name in names]
    except ZitterError as e:
        raise _exit_for(e) from e
    for config in configs:
        if out is not None:
            config.output.directory = str(out)
        if verbose:
            config.logging.level = "DEBUG"
    _setup_logging(configs[0].logging)
    return configs


ConfigOption = typer.Option(None, "--config", help="Scenario YAML file.")
ScenarioOption = typer.Option(None, "--scenario", help="Builtin scenario or group name.")
OutOption = typer.Option(None, "--out", help="Output directory.")
GridOption = typer.Option(None, "--grid-n", help="Number of momentum grid nodes.")
SetOption = typer.Option(None, "--set", help="Override a key, e.g. state.delta=0.1.")
VerboseOption = typer.Option(False, "--verbose", help="Enable DEBUG logging.")


@app.command(help="Run one scenario (or every member of a group) and write its data files.")
def evolve(
    config: Optional[Path] = ConfigOption,
    scenario: Optional[str] = ScenarioOption,
    out: Optional[Path] = OutOption,
    grid_n: Optional[int] = GridOption,
    set_: Optional[List[str]] = SetOption,
    verbose: bool = VerboseOption,
):
    failed = False
    for cfg in _load_configs(config, scenario, out, grid_n, set_, verbose):
        try:
            report = ScenarioEngine(cfg).run_scenario()
        except ZitterError as e:
            raise _exit_for(e) from e
        typer.echo(json.dumps(jsonable(report.summary), indent=2, sort_keys=True))
        try:
            report.raise_for_failures()
        except ToleranceError as e:
            logger.error("Run rejected: %s", e)
            failed = True
    raise typer.Exit(code=EXIT_TOLERANCE if failed else EXIT_OK)


@app.command(help="Compare full and Dirac evolution along a ladder of widths.")
def compare(
    config: Optional[Path] = ConfigOption,
    scenario: Optional[str] = ScenarioOption,
    out: Optional[Path] = OutOption,
    grid_n: Optional[int] = GridOption,
    set_: Optional[List[str]] = SetOption,
    verbose: bool = VerboseOption,
):
    failed = False
    for cfg in _load_configs(config, scenario, out, grid_n, set_, verbose):
        try:
            report = ScenarioEngine(cfg).compare_limits()
        except ZitterError as e:
            raise _exit_for(e) from e
        for delta, residual in zip(report.deltas, report.residuals):
            typer.echo(f"{report.scenario}: delta={delta:g} residual={residual:.6e}")
        try:
            report.raise_for_failures()
        except ToleranceError as e:
            logger.error("Comparison rejected: %s", e)
            failed = True
    raise typer.Exit(code=EXIT_TOLERANCE if failed else EXIT_OK)


@app.command(help="Tabulate the closed-form drift, Zitterbewegung and population formulas.")
def analytic(
    config: Optional[Path] = ConfigOption,
    scenario: Optional[str] = ScenarioOption,
    out: Optional[Path] = OutOption,
    grid_n: Optional[int] = GridOption,
    set_: Optional[List[str]] = SetOption,
    verbose: bool = VerboseOption,
    form: Form = typer.Option(Form.RESOLVED, "--form", help="resolved or printed."),
):
    for cfg in _load_configs(config, scenario, out, grid_n, set_, verbose):
        spec, params = cfg.gaussian_spec(), cfg.dimensionless_params()
        tau = cfg.time.grid()
        try:
            drift_result = drift(tau, params, spec.delta, form)
            columns = {TAU: tau, "x_d [1/kappa]": drift_result.x_d}
            info = {
                "scenario": cfg.scenario.name,
                "form": form.value,
                "drift_regime": drift_result.regime.value,
                "drift_slope": drift_result.slope,
                "damping_onset": damping_onset(params, spec.delta, form),
            }
            if params.v_z != 0:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    columns["x_z [1/kappa]"] = zitter_term(tau, params, spec.delta, form)
                for w in caught:
                    logger.warning("%s", w.message)
                columns["envelope [1/kappa]"] = zitter_envelope(tau, params, spec.delta, form)
                if form is Form.PRINTED:
                    info["optimal_terms"] = optimal_terms(abs(params.v_z) / spec.delta)
                elif params.c_theta > 0:
                    y = abs(params.v_z) / (2 * params.c_theta * spec.delta)
                    info["optimal_terms"] = optimal_terms(y)
            if spec.k0 != 0:
                columns["delta_N_limit"] = delta_limit_population(spec.k0, params, tau, form)
        except ZitterError as e:
            raise _exit_for(e) from e
        store = OutputStore(cfg.output.directory)
        run_dir = Path(cfg.output.directory) / cfg.scenario.name
        run_dir.mkdir(parents=True, exist_ok=True)
        store.write_table(run_dir / f"analytic_{form.value}.csv", columns)
        typer.echo(json.dumps(jsonable(info), indent=2, sort_keys=True))
    raise typer.Exit(code=EXIT_OK)


@app.command(help="Report Zitterbewegung frequency and damping onset in laboratory units.")
def scales(
    config: Optional[Path] = ConfigOption,
    scenario: Optional[str] = ScenarioOption,
    out: Optional[Path] = OutOption,
    set_: Optional[List[str]] = SetOption,
    verbose: bool = VerboseOption,
):
    if config is None and scenario is None:
        scenario = "rb87"
    for cfg in _load_configs(config, scenario, out, None, set_, verbose):
        if cfg.physical is None:
            logger.error(
                "Configuration error: scenario '%s' has no physical block",
                cfg.scenario.name,
            )
            raise typer.Exit(code=EXIT_CONFIG)
        p = cfg.physical_params()
        sigma = cfg.physical.sigma
        if sigma is None:
            sigma = float(np.sqrt(2) / (cfg.state.delta * p.kappa))
        try:
            result = physical_scales(p, sigma)
        except ZitterError as e:
            raise _exit_for(e) from e
        report = {
            "scenario": cfg.scenario.name,
            "sigma_m": sigma,
            "v_z": result.v_z,
            "delta": result.delta,
            "recoil_velocity_m_s": result.recoil_velocity,
            "zb_frequency_hz": result.zb_frequency,
            "damping_onset_s": result.damping_onset,
            "damping_onset_printed_s": result.damping_onset_printed,
            "time_unit_s": result.time_unit,
        }
        store = OutputStore(cfg.output.directory)
        run_dir = Path(cfg.output.directory) / cfg.scenario.name
        run_dir.mkdir(parents=True, exist_ok=True)
        store.write_summary(run_dir / "scales.json", report)
        typer.echo(json.dumps(jsonable(report), indent=2, sort_keys=True))
    raise typer.Exit(code=EXIT_OK)


@app.command(help="Run the fast invariant suite.")
def selftest(verbose: bool = VerboseOption):
    _setup_logging(LoggingConfig(level="DEBUG" if verbose else "INFO"))
    report = run_selftest()
    for result in report.results:
        status = "ok" if result.passed else "FAILED"
        typer.echo(f"{result.name:<14} {status:<7} {result.detail}")
    raise typer.Exit(code=EXIT_OK if report.passed else EXIT_TOLERANCE)


def main():
    app()


if __name__ == "__main__":
    main()
