"""
Run configuration.

A run config is a JSON file naming the device, materials and scenario files
(paths relative to the config file) plus the parameters of each command.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import PARSE_ERRORS, ConfigError, describe_parse_error
from .model.units import parse_length, parse_power, parse_temperature, parse_time
from .solver.steady import SolverSettings
from .utils.writers import read_json

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = (5e-6, 5e-6, 1e-6)
DEFAULT_OUT_DIR = "out"
DEFAULT_OPERATING_POWER = 20e-3
DEFAULT_TARGETS = (600.0,)
DEFAULT_BIAS_CURRENT = 1e-3

# Files each command needs before it can start
REQUIRED_FILES = {
    "steady": ("device", "materials", "scenario"),
    "transient": ("device", "materials", "scenario"),
    "sweep": ("device", "materials", "scenario"),
    "calibrate": ("calibration",),
    "report": (),
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration; all quantities in SI units."""

    path: Path | None = None
    device: Path | None = None
    materials: Path | None = None
    scenario: Path | None = None
    resolution: tuple[float, float, float] = DEFAULT_RESOLUTION
    solver: SolverSettings = field(default_factory=SolverSettings)
    out_dir: Path = Path(DEFAULT_OUT_DIR)
    max_voxels: int | None = None

    # steady
    compare_ambient: bool = False
    write_field: bool = True

    # transient
    t_end: float | None = None
    dt: float | None = None
    snapshot_every: int = 0

    # sweep
    powers: tuple[float, ...] = ()
    probe: str | None = None
    rth_powers: tuple[float, ...] = ()
    pt_curve: Path | None = None
    design_parameter: str | None = None
    design_values: tuple[float, ...] = ()
    design_power: float | None = None

    # calibrate
    calibration: Path | None = None
    bias_current: float = DEFAULT_BIAS_CURRENT
    voltages: Path | None = None

    # report
    inputs: tuple[Path, ...] = ()
    operating_power: float = DEFAULT_OPERATING_POWER
    targets: tuple[float, ...] = DEFAULT_TARGETS

    @property
    def base_dir(self) -> Path:
        return self.path.parent if self.path else Path.cwd()


def _path(base: Path, value) -> Path | None:
    if value in (None, ""):
        return None
    path = Path(value)
    return path if path.is_absolute() else base / path


def _resolution(value) -> tuple[float, float, float]:
    if value is None:
        return DEFAULT_RESOLUTION
    if not isinstance(value, list):
        value = [value] * 3
    if len(value) != 3:
        raise ConfigError("resolution must be one length or a list of three")
    resolution = tuple(parse_length(v) for v in value)
    if any(not h > 0 for h in resolution):
        raise ConfigError("resolution must be > 0 on every axis")
    return resolution


def _solver_settings(data: dict) -> SolverSettings:
    try:
        return SolverSettings(
            linear_tolerance=float(data.get("linear_tolerance", SolverSettings.linear_tolerance)),
            max_linear_iterations=data.get("max_linear_iterations"),
            picard_tolerance=float(data.get("picard_tolerance", SolverSettings.picard_tolerance)),
            max_picard_iterations=int(
                data.get("max_picard_iterations", SolverSettings.max_picard_iterations)
            ),
            damping=float(data.get("damping", 1.0)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid solver settings: {e}") from e


def parse_run_config(data: dict, path: Path | None = None, out_dir=None) -> RunConfig:
    """
    Build a RunConfig from parsed JSON.

    Args:
        data: Config dict
        path: Config file location (relative paths resolve against it)
        out_dir: Output directory override (--out)

    Raises:
        ConfigError: on malformed values
    """
    try:
        return _parse_run_config(data, path, out_dir)
    except PARSE_ERRORS as e:
        raise ConfigError(f"invalid run config: {describe_parse_error(e)}") from e


def _parse_run_config(data: dict, path: Path | None, out_dir) -> RunConfig:
    base = path.parent if path else Path.cwd()
    transient = data.get("transient", {})
    sweep = data.get("sweep", {})
    design = sweep.get("design", {})
    calibrate = data.get("calibrate", {})
    report = data.get("report", {})

    t_end = transient.get("t_end")
    dt = transient.get("dt")
    t_end = parse_time(t_end) if t_end is not None else None
    dt = parse_time(dt) if dt is not None else None
    if dt is not None and not dt > 0:
        raise ConfigError(f"dt must be > 0 (got {dt:g} s)")
    if t_end is not None and not t_end > 0:
        raise ConfigError(f"t_end must be > 0 (got {t_end:g} s)")

    powers = tuple(parse_power(p) for p in sweep.get("powers", []))
    if any(p < 0 for p in powers):
        raise ConfigError("sweep powers must be >= 0")

    if out_dir is not None:
        out = Path(out_dir)
    else:
        out = _path(base, data.get("out", DEFAULT_OUT_DIR))

    max_voxels = data.get("max_voxels")
    return RunConfig(
        path=path,
        device=_path(base, data.get("device")),
        materials=_path(base, data.get("materials")),
        scenario=_path(base, data.get("scenario")),
        resolution=_resolution(data.get("resolution")),
        solver=_solver_settings(data.get("solver", {})),
        out_dir=out,
        max_voxels=int(max_voxels) if max_voxels is not None else None,
        compare_ambient=bool(data.get("steady", {}).get("compare_ambient", False)),
        write_field=bool(data.get("steady", {}).get("write_field", True)),
        t_end=t_end,
        dt=dt,
        snapshot_every=int(transient.get("snapshot_every", 0)),
        powers=powers,
        probe=sweep.get("probe") or data.get("probe"),
        rth_powers=tuple(parse_power(p) for p in sweep.get("rth_powers", [])),
        pt_curve=_path(base, sweep.get("import")),
        design_parameter=design.get("parameter"),
        design_values=tuple(parse_length(v) for v in design.get("values", [])),
        design_power=parse_power(design["power"]) if "power" in design else None,
        calibration=_path(base, calibrate.get("samples")),
        bias_current=float(calibrate.get("bias_current", DEFAULT_BIAS_CURRENT)),
        voltages=_path(base, calibrate.get("voltages")),
        inputs=tuple(_path(base, p) for p in report.get("inputs", [])),
        operating_power=parse_power(report.get("operating_power", DEFAULT_OPERATING_POWER)),
        targets=tuple(parse_temperature(t) for t in report.get("targets", DEFAULT_TARGETS)),
    )


def load_run_config(path: str | Path, out_dir=None) -> RunConfig:
    """
    Load a run config file.

    Args:
        path: JSON run config
        out_dir: Output directory override

    Returns:
        RunConfig
    """
    path = Path(path)
    config = parse_run_config(read_json(path), path=path, out_dir=out_dir)
    logger.debug("Loaded run config %s", path)
    return config


def check_run_config(config: RunConfig, command: str) -> dict | None:
    """
    Return an error dict if files the command needs are missing.

    Use at the start of every command so callers get the missing file name
    instead of a failure halfway through a solve.

    Returns:
        Dict with "error" key and message if config is invalid, else None.
    """
    required = list(REQUIRED_FILES.get(command, ()))
    if command == "sweep" and config.pt_curve is not None:
        required = []
    missing = []
    for name in required:
        value = getattr(config, name)
        if value is None:
            missing.append(f"{name} (not set)")
        elif not Path(value).exists():
            missing.append(f"{name}: {value}")
    if command == "report":
        if not config.inputs:
            missing.append("report inputs (not set)")
        missing.extend(f"input: {p}" for p in config.inputs if not p.exists())
    if missing:
        return {"error": f"missing file(s) for {command}: {'; '.join(missing)}"}
    return None
