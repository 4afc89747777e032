"""
Power and geometry sweeps.

Each sweep point is an independent steady solve. Points may run on a
thread pool (MTCSIM_THREADS); results always follow input order.
Probe results are cached by scenario hash.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

from ..errors import ConfigError, MtcsimError, SolverError
from ..model.geometry import HotplateSpec, build_grid
from ..model.grid import VoxelGrid
from ..model.materials import MaterialTable
from ..model.scenario import Probe, ScenarioSpec, scenario_hash
from ..settings import get_thread_limit
from ..solver.probes import probe
from ..solver.steady import SolverSettings, solve_steady
from .fitting import PTCurve
from .metrics import rise_resistance

logger = logging.getLogger(__name__)

DEFAULT_PROBE = Probe(name="sensor", region="sensor", statistic="average")

# Oldest entries are evicted first
MAX_CACHE_ENTRIES = 1024

_cache: dict[tuple[str, str, str], float] = {}
_cache_lock = threading.Lock()


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def cache_size() -> int:
    with _cache_lock:
        return len(_cache)


def resolve_probe(scenario: ScenarioSpec, probe_name: str | None) -> Probe:
    """Named scenario probe, or the sensor-region average by default."""
    if probe_name is None:
        for p in scenario.probes:
            if p.name == DEFAULT_PROBE.name:
                return p
        return DEFAULT_PROBE
    return scenario.probe(probe_name)


def steady_probe(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials: MaterialTable,
    target: Probe,
    settings: SolverSettings = SolverSettings(),
) -> float:
    """Probe value of one steady solve, served from the cache when possible."""
    key = (scenario_hash(grid, scenario, materials), target.name, repr(settings))
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    field = solve_steady(grid, scenario, materials, settings)
    value = probe(field, target.region, target.statistic)
    with _cache_lock:
        while len(_cache) >= MAX_CACHE_ENTRIES:
            _cache.pop(next(iter(_cache)))
        _cache[key] = value
    return value


def _annotated(error: MtcsimError, label: str) -> MtcsimError:
    family = SolverError if isinstance(error, SolverError) else ConfigError
    if not isinstance(error, (SolverError, ConfigError)):
        family = type(error)
    return family(f"{label}: {error}")


def power_sweep(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials: MaterialTable,
    powers: list[float],
    probe_name: str | None = None,
    settings: SolverSettings = SolverSettings(),
    workers: int | None = None,
) -> PTCurve:
    """
    Steady probe temperature at each heater power.

    Args:
        grid: Device grid
        scenario: Template scenario; its sources are rescaled to each power
        materials: Material table
        powers: Strictly increasing powers (W)
        probe_name: Scenario probe to record (default: sensor-region average)
        settings: Solver tolerances
        workers: Thread count (default MTCSIM_THREADS)

    Returns:
        PTCurve tagged with the sweep's power-independent scenario hash
    """
    if not powers:
        raise ConfigError("power list is empty")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise ConfigError("powers must be strictly increasing")
    target = resolve_probe(scenario, probe_name)
    workers = workers or get_thread_limit()

    def point(power: float) -> float:
        try:
            return steady_probe(grid, scenario.with_total_power(power), materials, target, settings)
        except MtcsimError as e:
            raise _annotated(e, f"sweep point P = {power * 1e3:.6g} mW") from e

    logger.info("Power sweep: %d point(s), %d worker(s)", len(powers), workers)
    if workers > 1 and len(powers) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            temperatures = list(pool.map(point, powers))
    else:
        temperatures = [point(p) for p in powers]

    return PTCurve(
        powers=powers,
        temperatures=temperatures,
        probe=target.name,
        provenance=scenario_hash(grid, scenario, materials, ignore_power=True),
    )


def geometry_sweep(
    spec: HotplateSpec,
    resolution: tuple[float, float, float],
    scenario: ScenarioSpec,
    materials: MaterialTable,
    parameter: str,
    values: list[float],
    power: float,
    probe_name: str | None = None,
    settings: SolverSettings = SolverSettings(),
) -> list[dict]:
    """
    Probe temperature and chord R_th while one geometric parameter varies.

    Args:
        spec: Base device
        resolution: Target voxel sizes (m)
        scenario: Scenario template
        materials: Material table
        parameter: HotplateSpec length field, e.g. "bridge_length"
        values: Parameter values (m)
        power: Heater power for every point (W)

    Returns:
        One dict per value with value_m, T_probe_K and R_th_K_per_mW
    """
    target = resolve_probe(scenario, probe_name)
    driven = scenario.with_total_power(power)
    rows = []
    for value in values:
        variant = spec.with_parameter(parameter, value)
        grid = build_grid(variant, resolution)
        try:
            temperature = steady_probe(grid, driven, materials, target, settings)
        except MtcsimError as e:
            raise _annotated(e, f"design point {parameter} = {value:.6g} m") from e
        rows.append({
            "parameter": parameter,
            "value_m": float(value),
            "T_probe_K": temperature,
            "R_th_K_per_mW": rise_resistance(temperature, scenario.ambient_temperature, power),
        })
        logger.info("Design point %s = %.4g um: T = %.3f K", parameter, value * 1e6, temperature)
    return rows
