"""
mtcsim command line

Main entry point: `mtcsim steady|transient|sweep|calibrate|report --config
<file> [--out <dir>]`, plus `mtcsim runs [--out <dir>]` to list run records.
Every command prints a JSON result and exits with
0 (success), 1 (configuration error), 2 (solver failure) or 3 (I/O failure).
"""

import argparse
import json
import logging
import sys

from dotenv import load_dotenv

from . import __version__
from .analysis.jobs import complete_run, create_run, fail_run, generate_run_id, list_runs
from .config import DEFAULT_OUT_DIR, load_run_config
from .errors import MtcsimError
from .settings import get_log_level
from .tools.calibrate import cmd_calibrate
from .tools.report import cmd_report
from .tools.steady import cmd_steady
from .tools.sweep import cmd_sweep
from .tools.transient import cmd_transient

logger = logging.getLogger(__name__)

# Command table
COMMANDS = {
    "steady": (
        cmd_steady,
        "Steady temperature field, probe report and energy balance.",
    ),
    "transient": (
        cmd_transient,
        "Step response trace and thermal time constants (t_end, dt).",
    ),
    "sweep": (
        cmd_sweep,
        "P-T sweep or imported curve, quadratic fit and R_th table.",
    ),
    "calibrate": (
        cmd_calibrate,
        "Linear sensor calibration from (T, V) samples.",
    ),
    "report": (
        cmd_report,
        "Audit of sweep and transient artifacts against the operating target.",
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtcsim",
        description="Thermal simulation and analysis of MTC micro-hotplates.",
    )
    parser.add_argument("--version", action="version", version=f"mtcsim {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", required=True, help="Run config JSON file.")
        sub.add_argument("--out", default=None, help="Output directory (overrides the config).")

    runs = subparsers.add_parser("runs", help="List recent run records of an output directory.")
    runs.add_argument("--out", default=DEFAULT_OUT_DIR, help="Output directory of the runs.")
    runs.add_argument("--limit", type=int, default=20, help="Maximum number of runs.")
    return parser


def run_command(command: str, config_path: str, out_dir: str | None = None) -> tuple[dict, int]:
    """
    Run one command with run-record bookkeeping.

    Args:
        command: Name from COMMANDS
        config_path: Run config file
        out_dir: Output directory override

    Returns:
        (result dict, exit code)
    """
    handler, _ = COMMANDS[command]
    config = None
    run_id = None

    try:
        config = load_run_config(config_path, out_dir=out_dir)
        run_id = generate_run_id(command)
        create_run(config.out_dir, run_id, command, str(config.path))

        result = handler(config, run_id=run_id)
        exit_code = result.pop("exit_code", 0)
        if not exit_code:
            complete_run(config.out_dir, run_id, result["artifacts"], result.get("warnings"))

    except MtcsimError as e:
        exit_code = e.exit_code
        result = {"status": "error", "error": str(e), "command": command}

    except OSError as e:
        exit_code = 3
        result = {"status": "error", "error": str(e), "command": command}

    except Exception as e:
        logger.exception("Unexpected failure in %s", command)
        exit_code = 2
        result = {"status": "error", "error": f"{type(e).__name__}: {e}", "command": command}

    if exit_code and run_id:
        try:
            fail_run(config.out_dir, run_id, result.get("error", "failed"), exit_code)
        except OSError:
            logger.warning("Could not update run record %s", run_id)
    if run_id:
        result["run_id"] = run_id
    return result, exit_code


def list_recent_runs(out_dir: str, limit: int) -> tuple[dict, int]:
    """Run records of an output directory, most recent first."""
    try:
        runs = list_runs(out_dir, limit=limit)
    except (OSError, ValueError) as e:
        return {"status": "error", "error": str(e), "command": "runs"}, 3
    return {"status": "ok", "command": "runs", "count": len(runs), "runs": runs}, 0


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    load_dotenv()
    logging.basicConfig(
        level=get_log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    if args.command == "runs":
        result, exit_code = list_recent_runs(args.out, args.limit)
    else:
        result, exit_code = run_command(args.command, args.config, args.out)
    print(json.dumps(result, indent=2, sort_keys=True))
    return exit_code


if __name__ == "__main__":
    raise SystemExit(main())
