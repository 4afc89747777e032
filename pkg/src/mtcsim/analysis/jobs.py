"""
Run Records

Sidecar status files for command runs. Timestamps live only here so the
main artifacts of a run stay byte-reproducible.
"""

import json
from datetime import datetime
from pathlib import Path

from ..settings import get_runs_dir


def generate_run_id(command: str) -> str:
    """Generate a run ID from the command name and a timestamp."""
    return f"run_{command}_{datetime.now().strftime('%Y%m%d_%H%M%S_%f')}"


def get_run_path(runs_dir: Path, run_id: str) -> Path:
    return runs_dir / f"{run_id}.json"


def create_run(
    out_dir: str | Path,
    run_id: str,
    command: str,
    config_path: str | None,
    scenario_hash: str = "",
) -> dict:
    """
    Create a run record with initial status.

    Args:
        out_dir: Command output directory
        run_id: Unique run identifier
        command: CLI command name
        config_path: Config file the run was started from
        scenario_hash: Hash embedded in the run's artifacts

    Returns:
        Initial run status dict
    """
    status = {
        "run_id": run_id,
        "command": command,
        "status": "pending",
        "created_at": datetime.now().isoformat(),
        "updated_at": datetime.now().isoformat(),
        "config": config_path,
        "scenario_hash": scenario_hash,
        "message": "Run created",
        "artifacts": [],
    }
    save_run_status(out_dir, run_id, status)
    return status


def save_run_status(out_dir: str | Path, run_id: str, status: dict) -> None:
    """Save run status to its sidecar file."""
    status["updated_at"] = datetime.now().isoformat()
    path = get_run_path(get_runs_dir(out_dir), run_id)
    with open(path, "w") as f:
        json.dump(status, f, indent=2)


def load_run_status(out_dir: str | Path, run_id: str) -> dict | None:
    path = get_run_path(get_runs_dir(out_dir), run_id)
    if not path.exists():
        return None
    with open(path) as f:
        return json.load(f)


def update_run_progress(out_dir: str | Path, run_id: str, message: str, **fields) -> None:
    """
    Mark a run as running and record a progress message.

    Args:
        out_dir: Command output directory
        run_id: Run identifier
        message: Status message
        **fields: Extra values to store (e.g. scenario_hash)
    """
    status = load_run_status(out_dir, run_id)
    if not status:
        return
    status.update({"status": "running", "message": message, **fields})
    save_run_status(out_dir, run_id, status)


def complete_run(out_dir: str | Path, run_id: str, artifacts: list[str], warnings=None) -> None:
    """Mark a run as complete and list the artifacts it wrote."""
    status = load_run_status(out_dir, run_id)
    if not status:
        return
    status.update({
        "status": "complete",
        "message": "Run complete",
        "artifacts": sorted(artifacts),
        "warnings": list(warnings or []),
        "completed_at": datetime.now().isoformat(),
    })
    save_run_status(out_dir, run_id, status)


def fail_run(out_dir: str | Path, run_id: str, error: str, exit_code: int) -> None:
    """Mark a run as failed."""
    status = load_run_status(out_dir, run_id)
    if not status:
        return
    status.update({
        "status": "error",
        "message": f"Run failed: {error}",
        "error": error,
        "exit_code": exit_code,
        "failed_at": datetime.now().isoformat(),
    })
    save_run_status(out_dir, run_id, status)


def list_runs(out_dir: str | Path, limit: int = 20) -> list[dict]:
    """
    List recent runs, most recent first.

    Args:
        out_dir: Command output directory
        limit: Maximum number of runs to return
    """
    runs_dir = get_runs_dir(out_dir)
    files = sorted(runs_dir.glob("run_*.json"), key=lambda p: p.stat().st_mtime, reverse=True)
    runs = []
    for path in files[:limit]:
        with open(path) as f:
            runs.append(json.load(f))
    return runs
