"""
Regular voxel lattice.

Voxels are indexed [i, j, k] along x, y, z with spacings dx, dy, dz in
meters. material_id indexes into the grid's phase list; void voxels
(etched-away space) carry -1.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyRegionError, GeometryError, ScenarioError
from .materials import Phase

VOID = -1

AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in meters; selects voxels whose centers lie inside."""

    x0: float
    x1: float
    y0: float
    y1: float
    z0: float = -np.inf
    z1: float = np.inf

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0 and self.z1 > self.z0):
            raise ScenarioError(f"empty box: {self}")

    @classmethod
    def from_list(cls, values) -> "Box":
        if len(values) not in (4, 6):
            raise ScenarioError(f"box needs 4 or 6 coordinates, got {len(values)}")
        return cls(*[float(v) for v in values])


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class VoxelGrid:
    """Voxelized device: phases per voxel plus named feature/region masks."""

    spacing: tuple[float, float, float]
    material_id: np.ndarray
    phases: tuple[Phase, ...]
    feature_id: np.ndarray | None = None
    features: tuple[str, ...] = ()
    regions: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.material_id.ndim != 3 or self.material_id.size < 1:
            raise GeometryError("material_id must be a non-empty 3-D array")
        if any(not s > 0 for s in self.spacing):
            raise GeometryError(f"spacings must be > 0, got {self.spacing}")
        ids = self.material_id[self.material_id != VOID]
        if ids.size and (ids.min() < 0 or ids.max() >= len(self.phases)):
            raise GeometryError("material_id refers to an unknown phase")

        object.__setattr__(self, "material_id", _readonly(self.material_id.astype(np.int32)))
        if self.feature_id is not None:
            object.__setattr__(self, "feature_id", _readonly(self.feature_id.astype(np.int16)))
        object.__setattr__(
            self, "regions", {name: _readonly(m.astype(bool)) for name, m in self.regions.items()}
        )

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.material_id.shape

    @property
    def nx(self) -> int:
        return self.shape[0]

    @property
    def ny(self) -> int:
        return self.shape[1]

    @property
    def nz(self) -> int:
        return self.shape[2]

    @property
    def voxel_volume(self) -> float:
        dx, dy, dz = self.spacing
        return dx * dy * dz

    @property
    def void_mask(self) -> np.ndarray:
        return self.material_id == VOID

    @property
    def extent(self) -> tuple[float, float, float]:
        return tuple(n * d for n, d in zip(self.shape, self.spacing))

    def centers(self, axis: int) -> np.ndarray:
        n, d = self.shape[axis], self.spacing[axis]
        return (np.arange(n) + 0.5) * d

    def box_mask(self, box: Box) -> np.ndarray:
        cx, cy, cz = (self.centers(a) for a in range(3))
        mx = (cx >= box.x0) & (cx < box.x1)
        my = (cy >= box.y0) & (cy < box.y1)
        mz = (cz >= box.z0) & (cz < box.z1)
        return mx[:, None, None] & my[None, :, None] & mz[None, None, :]

    def region_mask(self, region: "str | Box", name: str | None = None) -> np.ndarray:
        """
        Non-void voxels selected by a named device region or a box.

        Raises:
            EmptyRegionError: if no non-void voxel is selected
        """
        if isinstance(region, Box):
            mask = self.box_mask(region)
            label = name or "box"
        elif region in self.regions:
            mask = self.regions[region]
            label = region
        elif region == "all":
            mask = np.ones(self.shape, dtype=bool)
            label = region
        else:
            known = ", ".join(sorted(self.regions)) or "none"
            raise ScenarioError(f"unknown region '{region}' (known: {known})")

        mask = mask & ~self.void_mask
        if not mask.any():
            raise EmptyRegionError(label)
        return mask

    def feature_mask(self, feature: str) -> np.ndarray:
        if feature not in self.features:
            raise GeometryError(f"unknown feature '{feature}'")
        return self.feature_id == self.features.index(feature)

    def phase_names(self) -> list[str]:
        return [p.name for p in self.phases]

    def fill_void(self, phase: Phase) -> "VoxelGrid":
        """Copy of the grid with every void voxel assigned the given phase."""
        phases = self.phases
        if phase in phases:
            pid = phases.index(phase)
        else:
            phases = phases + (phase,)
            pid = len(phases) - 1
        material_id = np.where(self.void_mask, pid, self.material_id)
        return VoxelGrid(
            spacing=self.spacing,
            material_id=material_id,
            phases=phases,
            feature_id=self.feature_id,
            features=self.features,
            regions=dict(self.regions),
        )

    def fingerprint(self) -> str:
        """Content hash; identical inputs give identical fingerprints."""
        digest = hashlib.sha256()
        digest.update(np.asarray(self.spacing, dtype=float).tobytes())
        digest.update(np.asarray(self.shape, dtype=np.int64).tobytes())
        digest.update(self.material_id.tobytes())
        digest.update("|".join(self.phase_names()).encode("utf-8"))
        return digest.hexdigest()[:16]

    @classmethod
    def from_materials(
        cls,
        names: np.ndarray,
        spacing: tuple[float, float, float],
        regions: dict[str, np.ndarray] | None = None,
    ) -> "VoxelGrid":
        """
        Grid from a 3-D array of material names ("" or None marks void).

        Args:
            names: Object array of shape (nx, ny, nz)
            spacing: (dx, dy, dz) in meters
            regions: Optional named masks

        Returns:
            VoxelGrid with one plain phase per distinct material
        """
        names = np.asarray(names, dtype=object)
        if names.ndim != 3:
            raise GeometryError("names must be a 3-D array")
        phases: list[Phase] = []
        lookup: dict[str, int] = {}
        material_id = np.full(names.shape, VOID, dtype=np.int32)
        for index in np.ndindex(names.shape):
            name = names[index]
            if not name:
                continue
            if name not in lookup:
                lookup[name] = len(phases)
                phases.append(Phase(name))
            material_id[index] = lookup[name]
        return cls(
            spacing=tuple(float(s) for s in spacing),
            material_id=material_id,
            phases=tuple(phases),
            regions=regions or {},
        )

    @classmethod
    def uniform(
        cls,
        shape: tuple[int, int, int],
        spacing: tuple[float, float, float],
        material: str,
    ) -> "VoxelGrid":
        """Fully solid grid of a single material."""
        if any(n < 1 for n in shape):
            raise GeometryError(f"voxel counts must be positive, got {shape}")
        return cls(
            spacing=tuple(float(s) for s in spacing),
            material_id=np.zeros(shape, dtype=np.int32),
            phases=(Phase(material),),
        )
