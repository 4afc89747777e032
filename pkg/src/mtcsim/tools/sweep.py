"""
Sweep command: P-T characteristic, quadratic fit and thermal resistance.
"""

import logging

import numpy as np

from ..config import RunConfig, check_run_config
from ..analysis.fitting import PTCurve, fit_quadratic, thermal_resistance
from ..analysis.sweep import geometry_sweep, power_sweep
from ..errors import ConfigError, RankDeficiencyError
from ..utils.gnuplot import write_pt_script
from ..utils.writers import read_pt_csv, write_json, write_pt_csv, write_table
from .common import clamp_messages, load_case, progress

logger = logging.getLogger(__name__)

PT_FILE = "sweep_pt.csv"
FIT_FILE = "sweep_fit.json"
RTH_FILE = "sweep_rth.csv"
DESIGN_FILE = "sweep_design.csv"
SCRIPT_FILE = "sweep.gp"

MIN_POWERS = 3


def rth_table(fit, powers_w) -> list[dict]:
    """Fit R_th (K/mW) at each requested power."""
    return [
        {"P_mW": p * 1e3, "R_th_K_per_mW": thermal_resistance(fit, p * 1e3)}
        for p in powers_w
    ]


def is_nondecreasing(values: np.ndarray, tolerance: float = 1e-9) -> bool:
    if values.size < 2:
        return True
    scale = max(float(np.max(np.abs(values))), 1.0)
    return bool(np.all(np.diff(values) >= -tolerance * scale))


def _simulate_curve(config: RunConfig, run_id: str | None) -> tuple[PTCurve, dict, list[str]]:
    distinct = len(set(config.powers))
    if distinct < MIN_POWERS:
        raise RankDeficiencyError(
            f"a quadratic fit needs at least {MIN_POWERS} distinct powers, got {distinct}"
        )
    case = load_case(config)
    progress(
        config, run_id, f"Sweeping {len(config.powers)} powers", scenario_hash=case.scenario_hash
    )
    curve = power_sweep(
        case.grid,
        case.scenario,
        case.materials,
        list(config.powers),
        probe_name=config.probe,
        settings=config.solver,
    )
    extra = {"device": case.spec.name}

    if config.design_parameter:
        power = config.design_power if config.design_power is not None else config.powers[-1]
        progress(
            config, run_id,
            f"Design sweep over {config.design_parameter} ({len(config.design_values)} values)",
        )
        extra["design"] = geometry_sweep(
            case.spec,
            config.resolution,
            case.scenario,
            case.materials,
            config.design_parameter,
            list(config.design_values),
            power=power,
            probe_name=config.probe,
            settings=config.solver,
        )
    return curve, extra, clamp_messages()


def cmd_sweep(config: RunConfig, run_id: str | None = None) -> dict:
    """
    P-T sweep (or imported P-T curve) with quadratic fit.

    Writes the P-T curve (CSV), the fit with its R_th table (JSON), the R_th
    table (CSV), an optional bridge-geometry design table and a gnuplot
    script.

    Args:
        config: Run configuration with sweep powers or an imported curve
        run_id: Run record to report progress to (optional)

    Returns:
        Dict with status, scenario_hash, fit, artifacts and warnings
    """
    config_error = check_run_config(config, "sweep")
    if config_error:
        return {"status": "error", "exit_code": 1, **config_error}

    if config.pt_curve is not None:
        curve = read_pt_csv(config.pt_curve)
        extra, warnings = {"source": config.pt_curve.name}, []
    elif config.powers:
        curve, extra, warnings = _simulate_curve(config, run_id)
    else:
        raise ConfigError("sweep needs either powers or an imported P-T curve")

    fit = fit_quadratic(curve)
    slopes = curve.slopes()
    monotone = is_nondecreasing(slopes)
    rth_powers = config.rth_powers or tuple(curve.powers)
    table = rth_table(fit, rth_powers)

    fit_doc = {
        "scenario_hash": curve.provenance,
        "probe": curve.probe,
        "fit": fit.as_dict(),
        "thermal_resistance": table,
        "finite_difference_R_th_K_per_mW": slopes.tolist(),
        "R_th_nondecreasing": monotone,
        "samples": {"P_W": curve.powers.tolist(), "T_K": curve.temperatures.tolist()},
        **extra,
    }

    out = config.out_dir
    artifacts = [
        str(write_pt_csv(out / PT_FILE, curve)),
        str(write_json(out / FIT_FILE, fit_doc)),
        str(write_table(out / RTH_FILE, {
            "P_mW": [row["P_mW"] for row in table],
            "R_th_K_per_mW": [row["R_th_K_per_mW"] for row in table],
        })),
        str(write_pt_script(out / SCRIPT_FILE, PT_FILE, fit.as_dict())),
    ]
    if "design" in extra:
        design = extra["design"]
        artifacts.append(str(write_table(out / DESIGN_FILE, {
            "value_m": [row["value_m"] for row in design],
            "T_probe_K": [row["T_probe_K"] for row in design],
            "R_th_K_per_mW": [row["R_th_K_per_mW"] for row in design],
        })))

    logger.info(
        "Fit: T = %.6g + %.6g P + %.6g P^2 (rms %.3g K)",
        fit.c0, fit.c1, fit.c2, fit.residual_rms,
    )
    return {
        "command": "sweep",
        "status": "ok",
        "scenario_hash": curve.provenance,
        "fit": fit.as_dict(),
        "R_th_nondecreasing": monotone,
        "artifacts": artifacts,
        "warnings": warnings,
    }
