"""
Transient command: step response trace and thermal time constants.
"""

import logging

from ..config import RunConfig, check_run_config
from ..analysis.timeconst import time_constant_report
from ..errors import ConfigError
from ..solver.transient import run_transient
from ..utils.gnuplot import write_trace_script
from ..utils.writers import write_json, write_trace_csv, write_vtk_field
from .common import clamp_messages, load_case, progress

logger = logging.getLogger(__name__)

TRACE_FILE = "transient_trace.csv"
TAU_FILE = "transient_tau.json"
SCRIPT_FILE = "transient.gp"


def cmd_transient(config: RunConfig, run_id: str | None = None) -> dict:
    """
    Step response of the configured scenario from the ambient state.

    Writes the probe trace (CSV), the time constants of every probe (JSON,
    both estimators) and a gnuplot script. Unsettled probes are reported as
    warnings; the command still succeeds.

    Args:
        config: Run configuration with t_end and dt
        run_id: Run record to report progress to (optional)

    Returns:
        Dict with status, scenario_hash, time constants, artifacts and warnings
    """
    config_error = check_run_config(config, "transient")
    if config_error:
        return {"status": "error", "exit_code": 1, **config_error}
    if config.t_end is None or config.dt is None:
        raise ConfigError("transient needs t_end and dt")

    case = load_case(config)
    steps = round(config.t_end / config.dt)
    progress(
        config, run_id, f"Running {steps} backward-Euler steps", scenario_hash=case.scenario_hash
    )
    trace = run_transient(
        case.grid,
        case.scenario,
        case.materials,
        t_end=config.t_end,
        dt=config.dt,
        settings=config.solver,
        snapshot_every=config.snapshot_every,
    )

    taus = [time_constant_report(trace, name) for name in trace.probes]
    warnings = clamp_messages()
    for tau in taus:
        if tau["status"] != "ok":
            warnings.append(f"time constant of '{tau['probe']}' {tau['status']}: {tau['reason']}")
        warnings.extend(tau.get("warnings", []))

    out = config.out_dir
    tau_doc = {
        **trace.metadata(),
        "scenario_hash": case.scenario_hash,
        "solve_hash": trace.scenario_hash,
        "device": case.spec.name,
        "total_power_W": case.scenario.total_power,
        "t_end_s": config.t_end,
        "time_constants": taus,
        "final_K": {name: float(values[-1]) for name, values in trace.probes.items()},
    }
    artifacts = [
        str(write_trace_csv(out / TRACE_FILE, trace)),
        str(write_json(out / TAU_FILE, tau_doc)),
        str(write_trace_script(out / SCRIPT_FILE, TRACE_FILE, list(trace.probes))),
    ]
    for time, snapshot in trace.snapshots:
        name = f"transient_field_{time * 1e3:.6g}ms.vtk"
        title = f"mtcsim transient t={time:.6g}s {case.scenario_hash}"
        artifacts.append(str(write_vtk_field(out / name, snapshot, title=title)))

    result = {
        "command": "transient",
        "status": "ok" if trace.ok else "error",
        "scenario_hash": case.scenario_hash,
        "time_constants": taus,
        "artifacts": artifacts,
        "warnings": warnings,
    }
    if not trace.ok:
        result.update({"exit_code": 2, "error": f"transient truncated: {trace.status}"})
    return result
