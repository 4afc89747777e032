"""Device model: units, materials, geometry, voxel grid and scenarios."""

from .geometry import FilmRegion, HotplateSpec, Layer, build_grid, feature_volumes
from .grid import Box, VoxelGrid
from .materials import Material, MaterialTable, Phase, conductivity_at
from .scenario import (
    FixedBoundary,
    Probe,
    ScenarioSpec,
    Source,
    integrate_power,
    scenario_hash,
    source_density,
)

__all__ = [
    "Box",
    "FilmRegion",
    "FixedBoundary",
    "HotplateSpec",
    "Layer",
    "Material",
    "MaterialTable",
    "Phase",
    "Probe",
    "ScenarioSpec",
    "Source",
    "VoxelGrid",
    "build_grid",
    "conductivity_at",
    "feature_volumes",
    "integrate_power",
    "scenario_hash",
    "source_density",
]
