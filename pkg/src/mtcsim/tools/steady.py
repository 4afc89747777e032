"""
Steady command: temperature field, probe report and energy balance.
"""

import logging

from ..config import RunConfig, check_run_config
from ..analysis.metrics import rise_resistance, temperature_uniformity
from ..model.scenario import integrate_power, region_label, scenario_hash
from ..solver.assembly import discretize
from ..solver.probes import boundary_flux, probe, probe_all, region_summary
from ..solver.steady import TemperatureField, solve_discretized
from ..utils.writers import write_json, write_vtk_field
from .common import Case, clamp_messages, load_case, progress

logger = logging.getLogger(__name__)

FIELD_FILE = "steady_field.vtk"
PROBES_FILE = "steady_probes.json"
ENERGY_FILE = "steady_energy.json"


def solve_case(case: Case, config: RunConfig, scenario=None) -> tuple:
    """Discretize and solve one scenario of a case; returns (disc, field)."""
    scenario = scenario or case.scenario
    disc = discretize(case.grid, scenario, case.materials)
    field = solve_discretized(
        disc,
        config.solver,
        scenario_id=scenario_hash(case.grid, scenario, case.materials),
    )
    return disc, field


def energy_balance(disc, field: TemperatureField, injected: float) -> dict:
    """Boundary outflow against injected power."""
    outflow = boundary_flux(disc, field)
    imbalance = outflow - injected
    return {
        "injected_W": injected,
        "boundary_outflow_W": outflow,
        "imbalance_W": imbalance,
        "relative_error": abs(imbalance) / injected if injected > 0 else 0.0,
    }


def probe_report(case: Case, field: TemperatureField, scenario=None) -> dict:
    """Max and average of every probe, with uniformity over its region."""
    scenario = scenario or case.scenario
    values = probe_all(field, scenario.probes)
    report = {}
    for p in scenario.probes:
        entry = region_summary(field, p.region)
        entry.update({
            "region": region_label(p.region),
            "statistic": p.statistic,
            "value_K": values[p.name],
            "uniformity": temperature_uniformity(field, p.region),
        })
        report[p.name] = entry
    return report


def compare_ambient(case: Case, config: RunConfig) -> dict:
    """
    Vacuum and still-air solves of the same scenario.

    Returns:
        Dict per mode with probe temperature and chord R_th (K/mW)
    """
    power = case.scenario.total_power
    target = case.scenario.probes[0]
    result = {"probe": target.name}
    for mode in ("vacuum", "still-air"):
        variant = case.scenario.with_ambient_mode(mode)
        _, field = solve_case(case, config, variant)
        temperature = probe(field, target.region, target.statistic)
        result[mode] = {
            "T_probe_K": temperature,
            "R_th_K_per_mW": (
                rise_resistance(temperature, variant.ambient_temperature, power)
                if power > 0 else None
            ),
        }
    return result


def cmd_steady(config: RunConfig, run_id: str | None = None) -> dict:
    """
    Solve the steady temperature field of the configured scenario.

    Writes the field (legacy VTK), the probe report and the energy-balance
    report into the output directory.

    Args:
        config: Run configuration
        run_id: Run record to report progress to (optional)

    Returns:
        Dict with status, scenario_hash, probe values, energy balance,
        artifacts and warnings
    """
    config_error = check_run_config(config, "steady")
    if config_error:
        return {"status": "error", "exit_code": 1, **config_error}

    case = load_case(config)
    progress(config, run_id, f"Solving {case.grid.shape} grid", scenario_hash=case.scenario_hash)

    disc, field = solve_case(case, config)
    power = integrate_power(case.grid, case.scenario)
    balance = energy_balance(disc, field, power["total"])
    probes = probe_report(case, field)

    probe_doc = {
        "scenario_hash": case.scenario_hash,
        "solve_hash": field.scenario_hash,
        "device": case.spec.name,
        "ambient_mode": case.scenario.ambient_mode,
        "ambient_temperature_K": case.scenario.ambient_temperature,
        "total_power_W": case.scenario.total_power,
        "unknowns": disc.n_unknowns,
        "grid_shape": list(case.grid.shape),
        "spacing_m": list(case.grid.spacing),
        "solver": field.metadata(),
        "probes": probes,
        "field": {"min_K": field.min, "max_K": field.max},
        "thermal_resistance_K_per_mW": {
            name: rise_resistance(entry["value_K"], case.scenario.ambient_temperature,
                                  case.scenario.total_power)
            for name, entry in probes.items()
        } if case.scenario.total_power > 0 else {},
    }
    if config.compare_ambient:
        progress(config, run_id, "Comparing vacuum and still-air ambient")
        probe_doc["ambient_comparison"] = compare_ambient(case, config)

    energy_doc = {
        "scenario_hash": case.scenario_hash,
        "solve_hash": field.scenario_hash,
        "sources_W": power["sources"],
        **balance,
    }

    out = config.out_dir
    artifacts = [
        str(write_json(out / PROBES_FILE, probe_doc)),
        str(write_json(out / ENERGY_FILE, energy_doc)),
    ]
    if config.write_field:
        title = f"mtcsim steady {case.spec.name} {case.scenario_hash}"
        artifacts.append(str(write_vtk_field(out / FIELD_FILE, field, title=title)))

    warnings = clamp_messages()
    logger.info(
        "Steady done: T max %.3f K, energy balance error %.2e",
        field.max, balance["relative_error"],
    )
    return {
        "command": "steady",
        "status": "ok",
        "scenario_hash": case.scenario_hash,
        "probes": {name: entry["value_K"] for name, entry in probes.items()},
        "energy_balance": balance,
        "artifacts": artifacts,
        "warnings": warnings,
    }
