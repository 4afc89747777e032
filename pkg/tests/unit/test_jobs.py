"""Unit tests for run records."""

import json
import os

import pytest
from freezegun import freeze_time

from mtcsim.analysis.jobs import (
    complete_run,
    create_run,
    fail_run,
    generate_run_id,
    list_runs,
    load_run_status,
    update_run_progress,
)
from mtcsim.settings import get_runs_dir


@pytest.mark.unit
class TestRunIdGeneration:
    """Test run ID generation."""

    @freeze_time("2026-03-01 12:00:00")
    def test_generate_run_id_format(self):
        """Test that the run ID carries the command and timestamp."""
        assert generate_run_id("steady") == "run_steady_20260301_120000_000000"

    def test_generate_run_id_prefix(self):
        assert generate_run_id("sweep").startswith("run_sweep_")


@pytest.mark.unit
class TestRunDirectory:
    """Test run directory management."""

    def test_default_under_out_dir(self, tmp_path):
        """Test that records go to <out>/runs without an override."""
        runs_dir = get_runs_dir(tmp_path / "out")
        assert runs_dir == tmp_path / "out" / "runs"
        assert runs_dir.is_dir()

    def test_env_override(self, tmp_path, temp_runs_dir):
        """Test that MTCSIM_RUNS_DIR wins over the output directory."""
        assert get_runs_dir(tmp_path / "out") == temp_runs_dir
        assert temp_runs_dir.is_dir()


@pytest.mark.unit
class TestRunLifecycle:
    """Test run status transitions."""

    @freeze_time("2026-03-01 12:00:00")
    def test_create_run(self, tmp_path, temp_runs_dir):
        """Test that create_run writes a pending record."""
        status = create_run(tmp_path, "run_a", "steady", "run.json", scenario_hash="abc")

        path = temp_runs_dir / "run_a.json"
        assert path.exists()
        saved = json.loads(path.read_text())
        assert saved == status
        assert saved["status"] == "pending"
        assert saved["command"] == "steady"
        assert saved["config"] == "run.json"
        assert saved["scenario_hash"] == "abc"
        assert saved["created_at"] == "2026-03-01T12:00:00"

    def test_update_progress(self, tmp_path, temp_runs_dir):
        create_run(tmp_path, "run_a", "sweep", "run.json")
        update_run_progress(tmp_path, "run_a", "Solved 3/5 powers", done=3)

        status = load_run_status(tmp_path, "run_a")
        assert status["status"] == "running"
        assert status["message"] == "Solved 3/5 powers"
        assert status["done"] == 3

    def test_complete_run(self, tmp_path, temp_runs_dir):
        """Test that completion lists sorted artifacts and warnings."""
        create_run(tmp_path, "run_a", "steady", "run.json")
        complete_run(tmp_path, "run_a", ["b.json", "a.vtk"], warnings=["clamped"])

        status = load_run_status(tmp_path, "run_a")
        assert status["status"] == "complete"
        assert status["artifacts"] == ["a.vtk", "b.json"]
        assert status["warnings"] == ["clamped"]
        assert "completed_at" in status

    def test_fail_run(self, tmp_path, temp_runs_dir):
        create_run(tmp_path, "run_a", "transient", "run.json")
        fail_run(tmp_path, "run_a", "dt must be > 0", exit_code=1)

        status = load_run_status(tmp_path, "run_a")
        assert status["status"] == "error"
        assert status["error"] == "dt must be > 0"
        assert status["exit_code"] == 1

    def test_updates_to_missing_run_are_ignored(self, tmp_path, temp_runs_dir):
        update_run_progress(tmp_path, "run_missing", "nothing")
        complete_run(tmp_path, "run_missing", [])
        fail_run(tmp_path, "run_missing", "boom", exit_code=2)
        assert load_run_status(tmp_path, "run_missing") is None
        assert list(temp_runs_dir.iterdir()) == []


@pytest.mark.unit
class TestListRuns:
    """Test run listing."""

    def test_most_recent_first(self, tmp_path, temp_runs_dir):
        for i, run_id in enumerate(("run_old", "run_mid", "run_new")):
            create_run(tmp_path, run_id, "steady", None)
            os.utime(temp_runs_dir / f"{run_id}.json", (1_000_000 + i, 1_000_000 + i))

        runs = list_runs(tmp_path)
        assert [r["run_id"] for r in runs] == ["run_new", "run_mid", "run_old"]

    def test_limit(self, tmp_path, temp_runs_dir):
        for i in range(5):
            create_run(tmp_path, f"run_{i}", "steady", None)
        assert len(list_runs(tmp_path, limit=2)) == 2
