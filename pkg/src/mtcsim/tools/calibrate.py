"""
Calibrate command: linear sensor calibration and its inverse transform.
"""

import logging

from ..config import RunConfig, check_run_config
from ..analysis.fitting import fit_linear_calibration, voltage_to_temperature
from ..utils.writers import read_calibration_csv, read_table, write_json, write_table

logger = logging.getLogger(__name__)

CALIBRATION_FILE = "calibration.json"
APPLIED_FILE = "calibration_applied.csv"


def cmd_calibrate(config: RunConfig, run_id: str | None = None) -> dict:
    """
    Fit V = slope * T + intercept to measured sensor samples.

    With a voltage file configured, also converts its V_V column to
    temperatures.

    Args:
        config: Run configuration with a calibration samples CSV (T_K,V_V)
        run_id: Unused; calibration runs in one step

    Returns:
        Dict with status, calibration curve, artifacts and warnings
    """
    config_error = check_run_config(config, "calibrate")
    if config_error:
        return {"status": "error", "exit_code": 1, **config_error}

    temperatures, voltages = read_calibration_csv(config.calibration)
    cal = fit_linear_calibration(temperatures, voltages, config.bias_current)
    logger.info(
        "Calibration: %.6g V/K, intercept %.6g V (rms %.3g V)",
        cal.slope, cal.intercept, cal.residual_rms,
    )

    out = config.out_dir
    doc = {
        "scenario_hash": "imported",
        "source": config.calibration.name,
        "calibration": cal.as_dict(),
    }
    artifacts = [str(write_json(out / CALIBRATION_FILE, doc))]

    if config.voltages is not None:
        measured = read_table(config.voltages, ["V_V"])["V_V"].to_numpy(dtype=float)
        converted = voltage_to_temperature(cal, measured)
        artifacts.append(str(write_table(out / APPLIED_FILE, {"V_V": measured, "T_K": converted})))

    return {
        "command": "calibrate",
        "status": "ok",
        "scenario_hash": "imported",
        "calibration": cal.as_dict(),
        "artifacts": artifacts,
        "warnings": [],
    }
