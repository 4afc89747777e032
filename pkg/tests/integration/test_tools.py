"""Integration tests for the command implementations on the small hot plate."""

import json
import logging

import pytest

from mtcsim.config import load_run_config
from mtcsim.errors import ConfigError, HashMismatchError, RankDeficiencyError
from mtcsim.tools.calibrate import APPLIED_FILE, CALIBRATION_FILE, cmd_calibrate
from mtcsim.tools.report import REPORT_FILE, TEXT_FILE, cmd_report
from mtcsim.tools.steady import ENERGY_FILE, FIELD_FILE, PROBES_FILE, cmd_steady
from mtcsim.tools.sweep import FIT_FILE, PT_FILE, RTH_FILE, cmd_sweep
from mtcsim.tools.transient import TAU_FILE, TRACE_FILE, cmd_transient

TRANSIENT = {"t_end": "1ms", "dt": "10us"}


@pytest.mark.integration
class TestSteadyCommand:
    """Test the steady command."""

    def test_writes_artifacts(self, write_run_config, tmp_path):
        config = load_run_config(write_run_config())
        result = cmd_steady(config)

        assert result["status"] == "ok"
        out = tmp_path / "out"
        for name in (FIELD_FILE, PROBES_FILE, ENERGY_FILE):
            assert (out / name).exists()
        assert result["probes"]["heater_max"] >= result["probes"]["sensor"] > 300.0
        assert result["energy_balance"]["relative_error"] < 1e-4

    def test_logs_grid_spacing(self, write_run_config, caplog):
        with caplog.at_level(logging.INFO, logger="mtcsim.tools.common"):
            cmd_steady(load_run_config(write_run_config(steady={"write_field": False})))
        assert "spacing 5 um x 5 um x 1 um" in caplog.text

    def test_probe_document(self, write_run_config, tmp_path):
        result = cmd_steady(load_run_config(write_run_config()))
        doc = json.loads((tmp_path / "out" / PROBES_FILE).read_text())
        assert doc["scenario_hash"] == result["scenario_hash"]
        assert doc["device"] == "small"
        assert doc["probes"]["sensor"]["statistic"] == "average"
        assert doc["thermal_resistance_K_per_mW"]["sensor"] > 0

    def test_compare_ambient(self, write_run_config, tmp_path):
        config = load_run_config(
            write_run_config(steady={"compare_ambient": True, "write_field": False})
        )
        cmd_steady(config)
        doc = json.loads((tmp_path / "out" / PROBES_FILE).read_text())
        comparison = doc["ambient_comparison"]
        assert comparison["still-air"]["R_th_K_per_mW"] <= comparison["vacuum"]["R_th_K_per_mW"]
        assert not (tmp_path / "out" / FIELD_FILE).exists()

    def test_missing_material_file(self, write_run_config):
        config = load_run_config(write_run_config(materials="lost_materials.json"))
        result = cmd_steady(config)
        assert result["status"] == "error"
        assert result["exit_code"] == 1
        assert "lost_materials.json" in result["error"]

    def test_material_missing_from_table(self, write_run_config, tmp_path):
        materials = json.loads((tmp_path / "materials.json").read_text())
        materials["materials"] = [m for m in materials["materials"] if m["name"] != "Ni"]
        (tmp_path / "partial.json").write_text(json.dumps(materials))
        config = load_run_config(write_run_config(materials="partial.json"))
        with pytest.raises(ConfigError, match="Ni"):
            cmd_steady(config)


@pytest.mark.integration
class TestTransientCommand:
    """Test the transient command."""

    def test_trace_and_time_constants(self, write_run_config, tmp_path):
        result = cmd_transient(load_run_config(write_run_config(transient=TRANSIENT)))

        assert result["status"] == "ok"
        out = tmp_path / "out"
        header = (out / TRACE_FILE).read_text().splitlines()[0]
        assert header == "t_seconds,sensor,heater_max"
        sensor = next(t for t in result["time_constants"] if t["probe"] == "sensor")
        assert sensor["status"] == "ok"
        assert 0 < sensor["tau_crossing_s"] < 1e-3
        doc = json.loads((out / TAU_FILE).read_text())
        assert doc["steps"] == 100
        assert doc["scheme"] == "backward-euler"
        assert doc["scenario_hash"] == result["scenario_hash"]

    def test_unsettled_is_a_warning(self, write_run_config):
        config = load_run_config(write_run_config(transient={"t_end": "20us", "dt": "5us"}))
        result = cmd_transient(config)
        assert result["status"] == "ok"
        assert any("unsettled" in w for w in result["warnings"])

    def test_snapshots(self, write_run_config, tmp_path):
        config = load_run_config(write_run_config(
            transient={"t_end": "100us", "dt": "10us", "snapshot_every": 5}
        ))
        result = cmd_transient(config)
        snapshots = [a for a in result["artifacts"] if a.endswith(".vtk")]
        assert len(snapshots) == 2
        assert (tmp_path / "out" / "transient_field_0.05ms.vtk").exists()

    def test_needs_time_step(self, write_run_config):
        with pytest.raises(ConfigError, match="t_end and dt"):
            cmd_transient(load_run_config(write_run_config()))


@pytest.mark.integration
class TestSweepCommand:
    """Test the sweep command."""

    def test_simulated_sweep(self, write_run_config, tmp_path):
        config = load_run_config(write_run_config(
            sweep={"powers": ["0mW", "1mW", "2mW", "3mW"], "rth_powers": ["0mW", "3mW"]}
        ))
        result = cmd_sweep(config)

        assert result["status"] == "ok"
        assert result["fit"]["c0_K"] == pytest.approx(300.0, abs=0.05)
        assert result["R_th_nondecreasing"]
        out = tmp_path / "out"
        for name in (PT_FILE, FIT_FILE, RTH_FILE, "sweep.gp"):
            assert (out / name).exists()
        assert (out / PT_FILE).read_text().splitlines()[0] == "P_W,T_K"
        doc = json.loads((out / FIT_FILE).read_text())
        assert [row["P_mW"] for row in doc["thermal_resistance"]] == [0.0, 3.0]

    def test_shares_hash_with_steady(self, write_run_config):
        steady = cmd_steady(load_run_config(write_run_config()))
        sweep = cmd_sweep(load_run_config(
            write_run_config(sweep={"powers": ["0mW", "2mW", "4mW"]})
        ))
        assert sweep["scenario_hash"] == steady["scenario_hash"]

    def test_two_powers_rejected(self, write_run_config, mocker):
        load = mocker.patch("mtcsim.tools.sweep.load_case")
        config = load_run_config(write_run_config(sweep={"powers": ["0mW", "1mW", "1mW"]}))
        with pytest.raises(RankDeficiencyError):
            cmd_sweep(config)
        load.assert_not_called()

    def test_design_table(self, write_run_config, tmp_path):
        config = load_run_config(write_run_config(sweep={
            "powers": ["0mW", "1mW", "2mW"],
            "design": {"parameter": "bridge_length", "values": ["10um", "20um"], "power": "1mW"},
        }))
        cmd_sweep(config)
        lines = (tmp_path / "out" / "sweep_design.csv").read_text().splitlines()
        assert lines[0] == "value_m,T_probe_K,R_th_K_per_mW"
        assert len(lines) == 3

    def test_imported_curve(self, write_run_config, data_dir):
        config = load_run_config(write_run_config(
            sweep={"import": str(data_dir / "pt_quadratic_lattice.csv")}
        ))
        result = cmd_sweep(config)
        assert result["scenario_hash"] == "imported"
        assert result["fit"]["c0_K"] == pytest.approx(305.23, abs=1e-6)
        assert result["fit"]["c1_K_per_mW"] == pytest.approx(10.297, abs=1e-6)
        assert result["fit"]["c2_K_per_mW2"] == pytest.approx(0.262, abs=1e-6)


@pytest.mark.integration
class TestCalibrateCommand:
    """Test the calibrate command."""

    def test_calibration_and_inverse(self, write_run_config, data_dir, tmp_path):
        (tmp_path / "readings.csv").write_text("V_V\n0.5\n0.75\n")
        config = load_run_config(write_run_config(calibrate={
            "samples": str(data_dir / "calibration_samples.csv"),
            "bias_current": 1e-3,
            "voltages": "readings.csv",
        }))
        result = cmd_calibrate(config)

        assert result["calibration"]["slope_V_per_K"] == pytest.approx(0.001)
        assert result["calibration"]["intercept_V"] == pytest.approx(0.2)
        assert (tmp_path / "out" / CALIBRATION_FILE).exists()
        lines = (tmp_path / "out" / APPLIED_FILE).read_text().splitlines()
        assert lines[0] == "V_V,T_K"
        assert [float(line.split(",")[1]) for line in lines[1:]] == pytest.approx([300.0, 550.0])

    def test_missing_samples(self, write_run_config):
        result = cmd_calibrate(load_run_config(write_run_config(calibrate={"samples": "none.csv"})))
        assert result["exit_code"] == 1
        assert "none.csv" in result["error"]


@pytest.mark.integration
class TestReportCommand:
    """Test the report command over earlier artifacts."""

    def test_combines_sweep_and_transient(self, write_run_config, tmp_path):
        cmd_sweep(load_run_config(
            write_run_config(sweep={"powers": ["0mW", "1mW", "2mW"]}), out_dir=tmp_path / "sweep"
        ))
        cmd_transient(load_run_config(
            write_run_config(transient=TRANSIENT), out_dir=tmp_path / "transient"
        ))
        config = load_run_config(write_run_config(report={
            "inputs": ["sweep", "transient"], "operating_power": "1mW", "targets": ["2000K"],
        }))
        result = cmd_report(config)

        report = result["report"]
        assert result["status"] == "ok"
        assert report["operating_point"]["reached"] is False
        assert report["operating_point"]["power_for_target"][0]["P_mW"] > 1.0
        assert {t["probe"] for t in report["time_constants"]} == {"sensor", "heater_max"}
        assert (tmp_path / "out" / REPORT_FILE).exists()
        assert (tmp_path / "out" / TEXT_FILE).read_text() == result["text"]

    def test_hash_mismatch(self, write_run_config, data_dir, tmp_path):
        cmd_sweep(load_run_config(
            write_run_config(sweep={"import": str(data_dir / "pt_quadratic_lattice.csv")}),
            out_dir=tmp_path / "sweep",
        ))
        cmd_transient(load_run_config(
            write_run_config(transient=TRANSIENT), out_dir=tmp_path / "transient"
        ))
        config = load_run_config(write_run_config(report={"inputs": ["sweep", "transient"]}))
        with pytest.raises(HashMismatchError):
            cmd_report(config)

    def test_duplicate_kind(self, write_run_config, tmp_path):
        for name in ("a", "b"):
            cmd_sweep(load_run_config(
                write_run_config(sweep={"powers": ["0mW", "1mW", "2mW"]}),
                out_dir=tmp_path / name,
            ))
        config = load_run_config(write_run_config(report={"inputs": ["a", "b"]}))
        with pytest.raises(ConfigError, match="more than one"):
            cmd_report(config)
