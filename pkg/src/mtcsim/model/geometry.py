"""
Parametric hot-plate description and its voxelization.

The device is a square frame (substrate) holding a suspended island through
four cross-bridges that join the middle of each island edge to the frame.
The plate (island + bridges) sits flush with the top of the frame. Thin
films (barrier, sensing layer, heater, sensor) are collapsed into the plate
voxels under their footprints.

Layout along x and y: frame | bridge | island | bridge | frame.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from functools import reduce
from pathlib import Path

import numpy as np

from ..errors import (
    PARSE_ERRORS,
    ArtifactIOError,
    FeatureTooThinError,
    GeometryError,
    describe_parse_error,
)
from .grid import VOID, VoxelGrid
from .materials import Phase
from .units import parse_length

logger = logging.getLogger(__name__)

DEFAULT_MAX_VOXELS = 5_000_000

FEATURES = ("frame", "bridge", "island")


@dataclass(frozen=True)
class Layer:
    """Thin film collapsed into the plate voxels below it."""

    material: str
    thickness: float


@dataclass(frozen=True)
class FilmRegion:
    """Axis-aligned film footprint, positioned relative to the island center."""

    center_x: float
    center_y: float
    size_x: float
    size_y: float
    layers: tuple[Layer, ...] = ()


@dataclass(frozen=True)
class HotplateSpec:
    """Suspended micro-hotplate geometry (all lengths in meters)."""

    island_width: float
    island_length: float
    plate_thickness: float
    bridge_length: float
    bridge_width: float
    frame_width: float
    frame_thickness: float
    plate_material: str
    frame_material: str
    bridge_material: str | None = None
    bridge_count: int = 4
    layers: tuple[Layer, ...] = ()
    heater: FilmRegion | None = None
    sensor: FilmRegion | None = None
    air_above: float = 0.0
    air_below: float = 0.0
    name: str = "hotplate"
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def total_width(self) -> float:
        return self.island_width + 2 * (self.bridge_length + self.frame_width)

    @property
    def total_length(self) -> float:
        return self.island_length + 2 * (self.bridge_length + self.frame_width)

    @property
    def total_height(self) -> float:
        return self.air_below + self.frame_thickness + self.air_above

    @property
    def island_origin(self) -> tuple[float, float]:
        offset = self.frame_width + self.bridge_length
        return offset, offset

    @property
    def island_center(self) -> tuple[float, float]:
        x0, y0 = self.island_origin
        return x0 + self.island_width / 2, y0 + self.island_length / 2

    @property
    def plate_z(self) -> tuple[float, float]:
        top = self.air_below + self.frame_thickness
        return top - self.plate_thickness, top

    def film_box(self, film: FilmRegion) -> tuple[float, float, float, float]:
        cx, cy = self.island_center
        return (
            cx + film.center_x - film.size_x / 2,
            cx + film.center_x + film.size_x / 2,
            cy + film.center_y - film.size_y / 2,
            cy + film.center_y + film.size_y / 2,
        )

    def validate(self) -> None:
        """Check the geometric invariants that do not depend on resolution."""
        if self.bridge_count != 4:
            raise GeometryError(f"bridge_count must be 4, got {self.bridge_count}")
        positive = {
            "island_width": self.island_width,
            "island_length": self.island_length,
            "plate_thickness": self.plate_thickness,
            "frame_width": self.frame_width,
            "frame_thickness": self.frame_thickness,
        }
        for name, value in positive.items():
            if not value > 0:
                raise GeometryError(f"{name} must be > 0, got {value}")
        if self.bridge_length < 0:
            raise GeometryError("bridge_length must be >= 0")
        if self.air_above < 0 or self.air_below < 0:
            raise GeometryError("air gaps must be >= 0")
        if self.bridge_length > 0 and not self.bridge_width > 0:
            raise GeometryError("bridge_width must be > 0")
        if self.bridge_width > min(self.island_width, self.island_length):
            raise GeometryError(
                "bridge_width exceeds the island edge it attaches to (island/bridge overlap)"
            )
        if self.plate_thickness > self.frame_thickness:
            raise GeometryError("plate_thickness exceeds frame_thickness")

        ix0, iy0 = self.island_origin
        ix1, iy1 = ix0 + self.island_width, iy0 + self.island_length
        for label, film in (("heater", self.heater), ("sensor", self.sensor)):
            if film is None:
                continue
            if not (film.size_x > 0 and film.size_y > 0):
                raise GeometryError(f"{label} size must be > 0")
            x0, x1, y0, y1 = self.film_box(film)
            tol = 1e-12
            if x0 < ix0 - tol or x1 > ix1 + tol or y0 < iy0 - tol or y1 > iy1 + tol:
                raise GeometryError(f"{label} region lies outside the island footprint")
        for layer in self.all_layers():
            if not layer.thickness > 0:
                raise GeometryError(f"film '{layer.material}' thickness must be > 0")

    def all_layers(self) -> list[Layer]:
        layers = list(self.layers)
        for film in (self.heater, self.sensor):
            if film is not None:
                layers.extend(film.layers)
        return layers

    def materials(self) -> set[str]:
        names = {self.plate_material, self.frame_material, self.bridge_material or self.plate_material}
        return names | {layer.material for layer in self.all_layers()}

    def with_parameter(self, parameter: str, value: float) -> "HotplateSpec":
        """Copy with one numeric field replaced (design sweeps)."""
        if parameter not in {
            "island_width", "island_length", "plate_thickness", "bridge_length",
            "bridge_width", "frame_width", "frame_thickness",
        }:
            raise GeometryError(f"unsupported design parameter '{parameter}'")
        return replace(self, **{parameter: float(value)})

    @classmethod
    def from_dict(cls, data: dict) -> "HotplateSpec":
        try:
            return cls._from_dict(data)
        except PARSE_ERRORS as e:
            raise GeometryError(f"invalid device file: {describe_parse_error(e)}") from e

    @classmethod
    def _from_dict(cls, data: dict) -> "HotplateSpec":
        try:
            island = data["island"]
            plate = data["plate"]
            bridges = data["bridges"]
            frame = data["frame"]
        except KeyError as e:
            raise GeometryError(f"device file is missing section {e}") from None

        def layers(entries) -> tuple[Layer, ...]:
            return tuple(
                Layer(material=entry["material"], thickness=parse_length(entry["thickness"]))
                for entry in entries or []
            )

        def film(entry) -> FilmRegion | None:
            if not entry:
                return None
            center = entry.get("center", [0, 0])
            size = entry["size"]
            return FilmRegion(
                center_x=parse_length(center[0]),
                center_y=parse_length(center[1]),
                size_x=parse_length(size[0]),
                size_y=parse_length(size[1]),
                layers=layers(entry.get("layers")),
            )

        ambient = data.get("ambient", {})
        spec = cls(
            name=data.get("name", "hotplate"),
            island_width=parse_length(island["width"]),
            island_length=parse_length(island.get("length", island["width"])),
            plate_thickness=parse_length(plate["thickness"]),
            plate_material=plate["material"],
            bridge_count=int(bridges.get("count", 4)),
            bridge_length=parse_length(bridges["length"]),
            bridge_width=parse_length(bridges["width"]),
            bridge_material=bridges.get("material"),
            frame_width=parse_length(frame["width"]),
            frame_thickness=parse_length(frame["thickness"]),
            frame_material=frame["material"],
            layers=layers(data.get("layers")),
            heater=film(data.get("heater")),
            sensor=film(data.get("sensor")),
            air_above=parse_length(ambient.get("air_above", 0)),
            air_below=parse_length(ambient.get("air_below", 0)),
            notes=tuple(data.get("notes", [])),
        )
        spec.validate()
        return spec

    @classmethod
    def from_json(cls, path: str | Path) -> "HotplateSpec":
        path = Path(path)
        if not path.exists():
            raise GeometryError(f"device file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise GeometryError(f"cannot parse device file {path}: {e}") from e
        except OSError as e:
            raise ArtifactIOError(f"cannot read device file {path}: {e}") from e
        return cls.from_dict(data)


def snap_spacing(coordinates: list[float], target: float, axis: str) -> float:
    """
    Largest spacing <= target that puts every coordinate on a voxel boundary.

    Coordinates are compared on a 1 nm lattice.

    Args:
        coordinates: Feature boundary coordinates along one axis (meters)
        target: Requested voxel size (meters)
        axis: Axis name for error messages

    Returns:
        Realized spacing in meters
    """
    if not target > 0:
        raise GeometryError(f"resolution along {axis} must be > 0")
    ticks = [round(c * 1e9) for c in coordinates]
    ticks = [t for t in ticks if t != 0]
    if not ticks:
        raise GeometryError(f"no extent along {axis}")
    common = reduce(math.gcd, ticks)
    pieces = math.ceil(common / (target * 1e9) - 1e-9)
    return common / pieces * 1e-9


def _check_feature(name: str, size: float, resolution: float) -> None:
    if size < resolution * (1 - 1e-9):
        raise FeatureTooThinError(name, size, resolution)


def build_grid(
    spec: HotplateSpec,
    resolution: tuple[float, float, float],
    max_voxels: int = DEFAULT_MAX_VOXELS,
) -> VoxelGrid:
    """
    Voxelize a hot-plate description.

    Spacings are reduced from the requested resolution until every feature
    boundary falls on a voxel boundary, so each feature is tiled exactly.

    Args:
        spec: Device geometry
        resolution: Target (dx, dy, dz) in meters
        max_voxels: Refuse grids larger than this

    Returns:
        VoxelGrid with features (frame, bridge, island) and regions
        (frame, bridges, island, plate, heater, sensor)
    """
    spec.validate()
    rx, ry, rz = resolution

    lateral = {
        "island_width": (spec.island_width, rx),
        "island_length": (spec.island_length, ry),
        "frame_width": (spec.frame_width, min(rx, ry)),
        "plate_thickness": (spec.plate_thickness, rz),
        "frame_thickness": (spec.frame_thickness, rz),
    }
    if spec.bridge_length > 0:
        lateral["bridge_length"] = (spec.bridge_length, min(rx, ry))
        lateral["bridge_width"] = (spec.bridge_width, min(rx, ry))
    if spec.frame_thickness > spec.plate_thickness:
        lateral["frame_below_plate"] = (spec.frame_thickness - spec.plate_thickness, rz)
    if spec.air_above > 0:
        lateral["air_above"] = (spec.air_above, rz)
    if spec.air_below > 0:
        lateral["air_below"] = (spec.air_below, rz)
    for label, film in (("heater", spec.heater), ("sensor", spec.sensor)):
        if film is not None:
            lateral[f"{label}_x"] = (film.size_x, rx)
            lateral[f"{label}_y"] = (film.size_y, ry)
    for name, (size, res) in lateral.items():
        _check_feature(name, size, res)

    ix0, iy0 = spec.island_origin
    ix1, iy1 = ix0 + spec.island_width, iy0 + spec.island_length
    cx, cy = spec.island_center
    half = spec.bridge_width / 2
    fw = spec.frame_width

    xs = [spec.total_width, fw, ix0, ix1, spec.total_width - fw]
    ys = [spec.total_length, fw, iy0, iy1, spec.total_length - fw]
    if spec.bridge_length > 0:
        xs += [cx - half, cx + half]
        ys += [cy - half, cy + half]
    for film in (spec.heater, spec.sensor):
        if film is not None:
            x0, x1, y0, y1 = spec.film_box(film)
            xs += [x0, x1]
            ys += [y0, y1]
    pz0, pz1 = spec.plate_z
    zs = [spec.total_height, spec.air_below, pz0, pz1]

    dx = snap_spacing(xs, rx, "x")
    dy = snap_spacing(ys, ry, "y")
    dz = snap_spacing(zs, rz, "z")
    shape = (
        round(spec.total_width / dx),
        round(spec.total_length / dy),
        round(spec.total_height / dz),
    )
    count = shape[0] * shape[1] * shape[2]
    if count > max_voxels:
        raise GeometryError(
            f"grid of {shape} ({count:,} voxels) exceeds the limit of {max_voxels:,}; "
            "feature boundaries may not share a common spacing near the resolution"
        )
    logger.info(
        "Voxelizing %s: %s voxels at %.4g x %.4g x %.4g um",
        spec.name, shape, dx * 1e6, dy * 1e6, dz * 1e6,
    )

    def band(lo: float, hi: float, d: float) -> slice:
        return slice(round(lo / d), round(hi / d))

    nx, ny, nz = shape
    frame_mask = np.zeros(shape, dtype=bool)
    frame_z = band(spec.air_below, pz1, dz)
    frame_xy = np.ones((nx, ny), dtype=bool)
    frame_xy[band(fw, spec.total_width - fw, dx), band(fw, spec.total_length - fw, dy)] = False
    frame_mask[:, :, frame_z] = frame_xy[:, :, None]

    plate_z = band(pz0, pz1, dz)
    island_mask = np.zeros(shape, dtype=bool)
    island_mask[band(ix0, ix1, dx), band(iy0, iy1, dy), plate_z] = True

    bridge_mask = np.zeros(shape, dtype=bool)
    if spec.bridge_length > 0:
        bx = band(cx - half, cx + half, dx)
        by = band(cy - half, cy + half, dy)
        bridge_mask[band(fw, ix0, dx), by, plate_z] = True
        bridge_mask[band(ix1, spec.total_width - fw, dx), by, plate_z] = True
        bridge_mask[bx, band(fw, iy0, dy), plate_z] = True
        bridge_mask[bx, band(iy1, spec.total_length - fw, dy), plate_z] = True

    def footprint(film: FilmRegion | None) -> np.ndarray:
        mask = np.zeros(shape, dtype=bool)
        if film is not None:
            x0, x1, y0, y1 = spec.film_box(film)
            mask[band(x0, x1, dx), band(y0, y1, dy), plate_z] = True
        return mask

    heater_mask = footprint(spec.heater)
    sensor_mask = footprint(spec.sensor)

    feature_id = np.full(shape, VOID, dtype=np.int16)
    feature_id[frame_mask] = FEATURES.index("frame")
    feature_id[bridge_mask] = FEATURES.index("bridge")
    feature_id[island_mask] = FEATURES.index("island")

    phases: list[Phase] = []
    lookup: dict[Phase, int] = {}

    def phase_id(phase: Phase) -> int:
        if phase not in lookup:
            lookup[phase] = len(phases)
            phases.append(phase)
        return lookup[phase]

    material_id = np.full(shape, VOID, dtype=np.int32)
    material_id[frame_mask] = phase_id(Phase(spec.frame_material))
    material_id[bridge_mask] = phase_id(Phase(spec.bridge_material or spec.plate_material))

    # Films spread over all plate layers: ratio = film thickness / plate thickness
    def ratios(layers) -> tuple[tuple[str, float], ...]:
        return tuple((layer.material, layer.thickness / spec.plate_thickness) for layer in layers)

    island_films = ratios(spec.layers)
    heater_films = ratios(spec.heater.layers) if spec.heater else ()
    sensor_films = ratios(spec.sensor.layers) if spec.sensor else ()
    for on_heater in (False, True):
        for on_sensor in (False, True):
            mask = island_mask.copy()
            mask &= heater_mask if on_heater else ~heater_mask
            mask &= sensor_mask if on_sensor else ~sensor_mask
            if not mask.any():
                continue
            films = island_films
            films += heater_films if on_heater else ()
            films += sensor_films if on_sensor else ()
            material_id[mask] = phase_id(Phase(spec.plate_material, films))

    regions = {
        "frame": frame_mask,
        "bridges": bridge_mask,
        "island": island_mask,
        "plate": island_mask | bridge_mask,
    }
    if spec.heater is not None:
        regions["heater"] = heater_mask
    if spec.sensor is not None:
        regions["sensor"] = sensor_mask

    return VoxelGrid(
        spacing=(dx, dy, dz),
        material_id=material_id,
        phases=tuple(phases),
        feature_id=feature_id,
        features=FEATURES,
        regions=regions,
    )


def feature_volumes(spec: HotplateSpec) -> dict[str, float]:
    """Analytic solid volume of each feature (m^3)."""
    outer = spec.total_width * spec.total_length
    opening = (spec.total_width - 2 * spec.frame_width) * (spec.total_length - 2 * spec.frame_width)
    return {
        "frame": (outer - opening) * spec.frame_thickness,
        "bridge": 4 * spec.bridge_length * spec.bridge_width * spec.plate_thickness,
        "island": spec.island_width * spec.island_length * spec.plate_thickness,
    }
