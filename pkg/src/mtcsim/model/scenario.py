"""
Simulation scenarios: heat sources, fixed-temperature boundaries, ambient
mode and probes.
"""

import hashlib
import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from ..errors import (
    PARSE_ERRORS,
    ArtifactIOError,
    EmptyRegionError,
    ScenarioError,
    describe_parse_error,
)
from .grid import Box, VoxelGrid
from .units import parse_length, parse_power, parse_temperature

FACES = ("xmin", "xmax", "ymin", "ymax", "zmin", "zmax")
AMBIENT_MODES = ("vacuum", "still-air")
STATISTICS = ("max", "average")

Region = str | Box


@dataclass(frozen=True)
class Source:
    """Total power P dissipated uniformly over a region."""

    name: str
    region: Region
    power: float


@dataclass(frozen=True)
class FixedBoundary:
    """
    Surfaces held at a fixed temperature.

    faces are exterior grid faces (the temperature applies at the face);
    materials and regions select voxels whose temperature is held.
    """

    temperature: float
    faces: tuple[str, ...] = ()
    materials: tuple[str, ...] = ()
    regions: tuple[Region, ...] = ()

    def __post_init__(self):
        unknown = set(self.faces) - set(FACES)
        if unknown:
            raise ScenarioError(f"unknown boundary face(s): {sorted(unknown)}")
        if not self.temperature > 0:
            raise ScenarioError("boundary temperature must be > 0 K")
        if not (self.faces or self.materials or self.regions):
            raise ScenarioError("boundary selects nothing")


@dataclass(frozen=True)
class Probe:
    name: str
    region: Region
    statistic: str = "average"

    def __post_init__(self):
        if self.statistic not in STATISTICS:
            raise ScenarioError(f"probe '{self.name}': statistic must be one of {STATISTICS}")


@dataclass(frozen=True)
class ScenarioSpec:
    sources: tuple[Source, ...] = ()
    boundaries: tuple[FixedBoundary, ...] = ()
    probes: tuple[Probe, ...] = ()
    ambient_temperature: float = 300.0
    ambient_mode: str = "vacuum"
    air_material: str = "air"
    name: str = "scenario"

    def __post_init__(self):
        if self.ambient_mode not in AMBIENT_MODES:
            raise ScenarioError(f"ambient_mode must be one of {AMBIENT_MODES}")
        if not self.boundaries:
            raise ScenarioError("at least one fixed-temperature boundary is required")
        if not self.ambient_temperature > 0:
            raise ScenarioError("ambient temperature must be > 0 K")
        names = [p.name for p in self.probes]
        if len(names) != len(set(names)):
            raise ScenarioError("probe names must be unique")
        if any(s.power < 0 for s in self.sources):
            raise ScenarioError("source power must be >= 0")

    @property
    def total_power(self) -> float:
        return math.fsum(s.power for s in self.sources)

    def with_total_power(self, power: float) -> "ScenarioSpec":
        """
        Copy whose sources dissipate the given total power.

        A single source takes the power directly; several sources keep their
        relative shares (equal shares when all are zero).
        """
        if not self.sources:
            raise ScenarioError("scenario has no source to drive")
        total = self.total_power
        if total > 0:
            sources = tuple(replace(s, power=power * s.power / total) for s in self.sources)
        else:
            share = power / len(self.sources)
            sources = tuple(replace(s, power=share) for s in self.sources)
        return replace(self, sources=sources)

    def with_ambient_mode(self, mode: str) -> "ScenarioSpec":
        return replace(self, ambient_mode=mode)

    def probe(self, name: str) -> Probe:
        for p in self.probes:
            if p.name == name:
                return p
        raise ScenarioError(f"unknown probe '{name}'")

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioSpec":
        try:
            return cls._from_dict(data)
        except PARSE_ERRORS as e:
            raise ScenarioError(f"invalid scenario: {describe_parse_error(e)}") from e

    @classmethod
    def _from_dict(cls, data: dict) -> "ScenarioSpec":
        ambient = parse_temperature(data.get("ambient_temperature", 300.0))

        sources = tuple(
            Source(
                name=entry.get("name", f"source{i}"),
                region=_parse_region(entry["region"]),
                power=parse_power(entry["power"]),
            )
            for i, entry in enumerate(data.get("sources", []))
        )
        boundaries = tuple(
            FixedBoundary(
                temperature=parse_temperature(entry.get("temperature", ambient)),
                faces=tuple(entry.get("faces", [])),
                materials=tuple(entry.get("materials", [])),
                regions=tuple(_parse_region(r) for r in entry.get("regions", [])),
            )
            for entry in data.get("boundaries", [])
        )
        probes = tuple(
            Probe(
                name=entry["name"],
                region=_parse_region(entry["region"]),
                statistic=entry.get("statistic", "average"),
            )
            for entry in data.get("probes", [])
        )
        return cls(
            name=data.get("name", "scenario"),
            sources=sources,
            boundaries=boundaries,
            probes=probes,
            ambient_temperature=ambient,
            ambient_mode=data.get("ambient_mode", "vacuum"),
            air_material=data.get("air_material", "air"),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioSpec":
        path = Path(path)
        if not path.exists():
            raise ScenarioError(f"scenario file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ScenarioError(f"cannot parse scenario file {path}: {e}") from e
        except OSError as e:
            raise ArtifactIOError(f"cannot read scenario file {path}: {e}") from e
        return cls.from_dict(data)


def _parse_region(value) -> Region:
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return Box.from_list([parse_length(v) for v in value])
    if isinstance(value, dict):
        keys = ("x0", "x1", "y0", "y1", "z0", "z1")
        coords = [parse_length(value[k]) for k in keys if k in value]
        return Box.from_list(coords)
    raise ScenarioError(f"invalid region: {value!r}")


def region_label(region: Region) -> str:
    return region if isinstance(region, str) else "box"


def source_density(grid: VoxelGrid, scenario: ScenarioSpec) -> np.ndarray:
    """
    Volumetric heat generation Q (W/m^3) per voxel.

    Each source spreads its power uniformly over the non-void voxels of its
    region.
    """
    q = np.zeros(grid.shape, dtype=float)
    for source in scenario.sources:
        try:
            mask = grid.region_mask(source.region, name=source.name)
        except EmptyRegionError:
            raise EmptyRegionError(f"{source.name} ({region_label(source.region)})") from None
        count = int(np.count_nonzero(mask))
        q[mask] += source.power / (count * grid.voxel_volume)
    return q


def integrate_power(grid: VoxelGrid, scenario: ScenarioSpec) -> dict:
    """
    Volume-integrate each source's discretized heat generation.

    Returns:
        Dict with "sources" (name -> watts) and "total" (watts)
    """
    per_source = {}
    for source in scenario.sources:
        single = replace(scenario, sources=(source,))
        q = source_density(grid, single)
        per_source[source.name] = math.fsum((q[q != 0] * grid.voxel_volume).tolist())
    return {
        "sources": per_source,
        "total": math.fsum(per_source.values()),
    }


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def scenario_hash(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials=None,
    ignore_power: bool = False,
) -> str:
    """
    Stable identifier of a (grid, scenario, materials) combination.

    With ignore_power, source powers are zeroed first so every point of a
    power sweep shares one identifier.
    """
    if ignore_power and scenario.sources:
        scenario = replace(
            scenario, sources=tuple(replace(s, power=0.0) for s in scenario.sources)
        )
    payload = {
        "grid": grid.fingerprint(),
        "scenario": _jsonable(asdict(scenario)),
    }
    if materials is not None:
        payload["materials"] = _jsonable(
            {name: asdict(m) for name, m in sorted(materials.materials.items())}
        )
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]
