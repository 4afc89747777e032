"""
Shared loading for commands that simulate the device.
"""

import logging
from dataclasses import dataclass, replace

from ..config import RunConfig
from ..errors import ConfigError
from ..model.geometry import DEFAULT_MAX_VOXELS, HotplateSpec, build_grid
from ..model.grid import VoxelGrid
from ..model.materials import MaterialTable, clamp_counts, reset_clamp_warnings
from ..model.scenario import ScenarioSpec, scenario_hash
from ..analysis.jobs import update_run_progress
from ..analysis.sweep import clear_cache, resolve_probe
from ..utils.formatters import format_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Case:
    """Everything a simulation command works on."""

    spec: HotplateSpec
    grid: VoxelGrid
    materials: MaterialTable
    scenario: ScenarioSpec

    @property
    def scenario_hash(self) -> str:
        """Power-independent identifier shared by every artifact of this case."""
        return scenario_hash(self.grid, self.scenario, self.materials, ignore_power=True)


def load_case(config: RunConfig) -> Case:
    """
    Parse device, materials and scenario and voxelize the device.

    Scenarios without probes get the default sensor-average probe.
    """
    spec = HotplateSpec.from_json(config.device)
    materials = MaterialTable.from_json(config.materials)
    scenario = ScenarioSpec.from_json(config.scenario)
    if not scenario.probes:
        scenario = replace(scenario, probes=(resolve_probe(scenario, None),))

    missing = sorted(spec.materials() - set(materials.materials))
    if missing:
        raise ConfigError(f"materials missing from {config.materials.name}: {', '.join(missing)}")

    grid = build_grid(spec, config.resolution, max_voxels=config.max_voxels or DEFAULT_MAX_VOXELS)
    reset_clamp_warnings()
    clear_cache()
    spacing = " x ".join(format_length(h) for h in grid.spacing)
    logger.info("Loaded %s: grid %s, spacing %s", spec.name, grid.shape, spacing)
    return Case(spec=spec, grid=grid, materials=materials, scenario=scenario)


def clamp_messages() -> list[str]:
    """Warnings for k(T) queries clamped to the table range since the last load."""
    return [
        f"k(T) of '{name}' clamped to its table range for {count} voxel evaluation(s)"
        for name, count in sorted(clamp_counts().items())
    ]


def progress(config: RunConfig, run_id: str | None, message: str, **fields) -> None:
    logger.info(message)
    if run_id:
        update_run_progress(config.out_dir, run_id, message, **fields)
