"""
Report command: audit of sweep and transient artifacts.

Reads the fit and time-constant artifacts of earlier runs, refuses to mix
artifacts whose scenario hashes differ, and evaluates the operating point
against the target temperatures.
"""

import logging
from pathlib import Path

from ..config import RunConfig, check_run_config
from ..analysis.fitting import QuadraticFit, power_for_temperature, thermal_resistance
from ..errors import ConfigError, HashMismatchError
from ..utils.formatters import build_report_text
from ..utils.writers import read_json, write_json, write_text
from .sweep import FIT_FILE
from .transient import TAU_FILE

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
TEXT_FILE = "report.md"


def collect_artifacts(inputs: list[Path]) -> dict[str, dict]:
    """
    Fit and time-constant documents found in the input paths.

    Inputs may be artifact directories or the JSON files themselves.

    Returns:
        Dict keyed by "fit" and/or "transient"
    """
    found = {}
    for path in inputs:
        candidates = [path / FIT_FILE, path / TAU_FILE] if path.is_dir() else [path]
        for candidate in candidates:
            if not candidate.exists():
                continue
            doc = read_json(candidate)
            if "time_constants" in doc:
                kind = "transient"
            elif "fit" in doc:
                kind = "fit"
            else:
                raise ConfigError(f"{candidate} is not a sweep or transient artifact")
            if kind in found:
                raise ConfigError(f"more than one {kind} artifact among the report inputs")
            found[kind] = doc
    if not found:
        raise ConfigError("no sweep or transient artifacts found in the report inputs")
    return found


def check_hashes(documents: dict[str, dict]) -> str:
    """Common scenario hash of all documents."""
    hashes = {kind: doc.get("scenario_hash", "") for kind, doc in documents.items()}
    distinct = set(hashes.values())
    if len(distinct) > 1:
        listed = ", ".join(f"{kind}={value or '?'}" for kind, value in sorted(hashes.items()))
        raise HashMismatchError(f"artifacts come from different scenarios: {listed}")
    return distinct.pop()


def operating_point(fit: QuadraticFit, power_w: float, targets: tuple[float, ...]) -> dict:
    """Fit temperature at the operating power and the power each target needs."""
    temperature = float(fit.predict(power_w * 1e3))
    rows = []
    for target in targets:
        try:
            needed = power_for_temperature(fit, target)
        except ConfigError:
            needed = None
        rows.append({"T_K": target, "P_mW": needed})
    primary = targets[0]
    return {
        "power_mW": power_w * 1e3,
        "T_K": temperature,
        "target_K": primary,
        "reached": temperature >= primary,
        "power_for_target": rows,
    }


def cmd_report(config: RunConfig, run_id: str | None = None) -> dict:
    """
    Audit report over earlier sweep and transient artifacts.

    Args:
        config: Run configuration with report inputs, operating power and
            target temperatures
        run_id: Unused; the report runs in one step

    Returns:
        Dict with status, scenario_hash, the audit and artifacts
    """
    config_error = check_run_config(config, "report")
    if config_error:
        return {"status": "error", "exit_code": 1, **config_error}

    documents = collect_artifacts(list(config.inputs))
    common_hash = check_hashes(documents)
    report = {"scenario_hash": common_hash}

    if "fit" in documents:
        fit_doc = documents["fit"]["fit"]
        fit = QuadraticFit(
            c0=fit_doc["c0_K"],
            c1=fit_doc["c1_K_per_mW"],
            c2=fit_doc["c2_K_per_mW2"],
            residual_rms=fit_doc.get("residual_rms_K", 0.0),
            samples=fit_doc.get("samples", 0),
            provenance=fit_doc.get("provenance", common_hash),
        )
        powers = config.rth_powers or (0.0, config.operating_power)
        report["fit"] = fit.as_dict()
        report["thermal_resistance"] = [
            {"P_mW": p * 1e3, "R_th_K_per_mW": thermal_resistance(fit, p * 1e3)} for p in powers
        ]
        report["operating_point"] = operating_point(fit, config.operating_power, config.targets)

    if "transient" in documents:
        report["time_constants"] = documents["transient"].get("time_constants", [])

    text = build_report_text(report)
    out = config.out_dir
    artifacts = [
        str(write_json(out / REPORT_FILE, report)),
        str(write_text(out / TEXT_FILE, text)),
    ]

    return {
        "command": "report",
        "status": "ok",
        "scenario_hash": common_hash,
        "report": report,
        "text": text,
        "artifacts": artifacts,
        "warnings": [],
    }
