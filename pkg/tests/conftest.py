"""
Pytest configuration and shared fixtures for mtcsim tests.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from mtcsim.analysis.sweep import clear_cache
from mtcsim.model.geometry import FilmRegion, HotplateSpec, Layer, build_grid
from mtcsim.model.grid import VoxelGrid
from mtcsim.model.materials import Material, MaterialTable, reset_clamp_warnings
from mtcsim.model.scenario import FixedBoundary, Probe, ScenarioSpec, Source
from mtcsim.solver.steady import SolverSettings

DATA_DIR = Path(__file__).parent.parent / "data"

# Tight enough that solver noise stays far below the exactness checks
TIGHT = SolverSettings(linear_tolerance=1e-15, picard_tolerance=1e-10)


# ============================================================================
# Environment and Configuration Fixtures
# ============================================================================

@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    """Run every test without user-level mtcsim settings."""
    for name in ("MTCSIM_THREADS", "MTCSIM_RUNS_DIR", "MTCSIM_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def _fresh_state():
    """Empty sweep cache and clamp counters between tests."""
    clear_cache()
    reset_clamp_warnings()
    yield
    clear_cache()


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def temp_runs_dir(tmp_path, monkeypatch):
    """Run records go to a temporary directory."""
    runs_dir = tmp_path / "runs"
    monkeypatch.setenv("MTCSIM_RUNS_DIR", str(runs_dir))
    return runs_dir


# ============================================================================
# Material Fixtures
# ============================================================================

@pytest.fixture
def constant_materials():
    """Constant-k materials named after their role."""
    return MaterialTable({
        "GaAs": Material("GaAs", volumetric_heat_capacity=1.7546e6, conductivity=46.0),
        "Pt": Material("Pt", volumetric_heat_capacity=2.8529e6, conductivity=71.6),
        "Ni": Material("Ni", volumetric_heat_capacity=3.9552e6, conductivity=90.9),
        "air": Material("air", volumetric_heat_capacity=1168.0, conductivity=0.026),
        "rod": Material("rod", volumetric_heat_capacity=1.0e6, conductivity=10.0),
        "sink": Material("sink", volumetric_heat_capacity=1.0e6, conductivity=100.0),
        "node": Material("node", volumetric_heat_capacity=2.0e6, conductivity=100.0),
    })


@pytest.fixture
def kt_materials(constant_materials):
    """Same set with a decreasing k(T) for GaAs."""
    table = dict(constant_materials.materials)
    table["GaAs"] = Material(
        "GaAs",
        volumetric_heat_capacity=1.7546e6,
        conductivity_table=(
            (250.0, 57.6), (300.0, 46.0), (350.0, 38.1), (400.0, 32.1), (500.0, 24.6),
            (600.0, 19.3), (700.0, 15.9), (800.0, 13.4), (900.0, 11.4),
        ),
    )
    return MaterialTable(table)


@pytest.fixture
def reference_materials():
    return MaterialTable.from_json(DATA_DIR / "materials.json")


@pytest.fixture
def reference_constant_materials():
    return MaterialTable.from_json(DATA_DIR / "materials_constant.json")


# ============================================================================
# Grid and Device Fixtures
# ============================================================================

def rod_grid(n: int, length: float = 100e-6, material: str = "rod") -> VoxelGrid:
    """1-D rod of n voxels along x with a 1 um x 1 um cross-section."""
    return VoxelGrid.uniform((n, 1, 1), (length / n, 1e-6, 1e-6), material)


def rod_scenario(left: float = 300.0, right: float = 400.0, power: float = 0.0) -> ScenarioSpec:
    sources = (Source("bulk", "all", power),) if power else ()
    return ScenarioSpec(
        sources=sources,
        boundaries=(
            FixedBoundary(temperature=left, faces=("xmin",)),
            FixedBoundary(temperature=right, faces=("xmax",)),
        ),
        probes=(Probe("rod", "all", "average"),),
        ambient_temperature=300.0,
    )


@pytest.fixture
def small_spec():
    """Hot plate small enough for unit and integration tests (20 x 20 x 4 voxels)."""
    return HotplateSpec(
        name="small",
        island_width=40e-6,
        island_length=40e-6,
        plate_thickness=2e-6,
        bridge_length=20e-6,
        bridge_width=10e-6,
        frame_width=10e-6,
        frame_thickness=4e-6,
        plate_material="GaAs",
        frame_material="GaAs",
        heater=FilmRegion(0.0, 0.0, 20e-6, 20e-6, (Layer("Pt", 200e-9),)),
        sensor=FilmRegion(0.0, 15e-6, 20e-6, 10e-6, (Layer("Ni", 100e-9),)),
    )


@pytest.fixture
def small_resolution():
    return (5e-6, 5e-6, 1e-6)


@pytest.fixture
def small_grid(small_spec, small_resolution):
    return build_grid(small_spec, small_resolution)


@pytest.fixture
def heater_scenario():
    """1 mW in the heater, frame held at 300 K."""
    return ScenarioSpec(
        name="heater",
        sources=(Source("heater", "heater", 1e-3),),
        boundaries=(FixedBoundary(temperature=300.0, regions=("frame",)),),
        probes=(
            Probe("sensor", "sensor", "average"),
            Probe("heater_max", "heater", "max"),
        ),
        ambient_temperature=300.0,
    )


@pytest.fixture
def small_device_files(tmp_path):
    """Device, materials and scenario JSON for the small hot plate."""
    device = {
        "name": "small",
        "island": {"width": "40um", "length": "40um"},
        "plate": {"material": "GaAs", "thickness": "2um"},
        "bridges": {"count": 4, "length": "20um", "width": "10um"},
        "frame": {"material": "GaAs", "width": "10um", "thickness": "4um"},
        "heater": {"center": [0, 0], "size": ["20um", "20um"],
                   "layers": [{"material": "Pt", "thickness": "200nm"}]},
        "sensor": {"center": ["0um", "15um"], "size": ["20um", "10um"],
                   "layers": [{"material": "Ni", "thickness": "100nm"}]},
    }
    scenario = {
        "name": "heater",
        "ambient_temperature": "300K",
        "sources": [{"name": "heater", "region": "heater", "power": "1mW"}],
        "boundaries": [{"temperature": "300K", "regions": ["frame"]}],
        "probes": [
            {"name": "sensor", "region": "sensor"},
            {"name": "heater_max", "region": "heater", "statistic": "max"},
        ],
    }
    paths = {
        "device": tmp_path / "device.json",
        "scenario": tmp_path / "scenario.json",
        "materials": tmp_path / "materials.json",
    }
    paths["device"].write_text(json.dumps(device))
    paths["scenario"].write_text(json.dumps(scenario))
    paths["materials"].write_text((DATA_DIR / "materials.json").read_text())
    return paths


@pytest.fixture
def write_run_config(tmp_path, small_device_files):
    """Factory writing a run config for the small device; returns its path."""

    def _write(name: str = "run.json", **sections) -> Path:
        config = {
            "device": small_device_files["device"].name,
            "materials": small_device_files["materials"].name,
            "scenario": small_device_files["scenario"].name,
            "resolution": ["5um", "5um", "1um"],
            "out": "out",
        }
        config.update(sections)
        path = tmp_path / name
        path.write_text(json.dumps(config))
        return path

    return _write


# ============================================================================
# Helper Functions
# ============================================================================

def exponential_trace(tau: float, rise: float = 30.0, step: float = 10e-6, t_end=None):
    """Sampled 300 + rise * (1 - exp(-t / tau))."""
    t_end = 10 * tau if t_end is None else t_end
    times = np.arange(0.0, t_end + step / 2, step)
    return times, 300.0 + rise * (1.0 - np.exp(-times / tau))


def reference_fit_samples(powers_mw):
    """Samples of T = 305.23 + 10.297 P + 0.262 P^2 (P in mW)."""
    p = np.asarray(powers_mw, dtype=float)
    return 305.23 + 10.297 * p + 0.262 * p * p
