"""
Thermal material models.

A Material has either a constant conductivity or a piecewise-linear k(T)
table, plus a volumetric heat capacity (rho * c_p). A Phase is what a voxel
actually holds: a base material optionally carrying collapsed thin films,
which makes it anisotropic (parallel averaging in-plane, series averaging
through-plane).
"""

import json
import logging
import threading
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import PARSE_ERRORS, ArtifactIOError, MaterialError, describe_parse_error

logger = logging.getLogger(__name__)

# Out-of-table k(T) queries per material name
clamp_warnings: Counter = Counter()
_clamp_lock = threading.Lock()


def reset_clamp_warnings() -> None:
    with _clamp_lock:
        clamp_warnings.clear()


def clamp_counts() -> dict[str, int]:
    with _clamp_lock:
        return dict(clamp_warnings)


@dataclass(frozen=True)
class Material:
    """Thermal properties of one material."""

    name: str
    volumetric_heat_capacity: float
    conductivity: float | None = None
    conductivity_table: tuple[tuple[float, float], ...] = ()
    source: str = ""

    def __post_init__(self):
        if (self.conductivity is None) == (not self.conductivity_table):
            raise MaterialError(
                f"material '{self.name}': give exactly one of conductivity or conductivity_table"
            )
        if self.conductivity is not None and not self.conductivity > 0:
            raise MaterialError(f"material '{self.name}': conductivity must be > 0")
        if not self.volumetric_heat_capacity > 0:
            raise MaterialError(f"material '{self.name}': volumetric_heat_capacity must be > 0")
        if self.conductivity_table:
            temps = [t for t, _ in self.conductivity_table]
            if any(b <= a for a, b in zip(temps, temps[1:])):
                raise MaterialError(
                    f"material '{self.name}': table temperatures must be strictly increasing"
                )
            if any(not k > 0 for _, k in self.conductivity_table):
                raise MaterialError(f"material '{self.name}': table conductivities must be > 0")

    @property
    def is_constant(self) -> bool:
        return self.conductivity is not None

    def conductivity_array(self, temperature: np.ndarray) -> np.ndarray:
        """Vectorized k(T); clamps outside the table and counts the clamped queries."""
        temperature = np.asarray(temperature, dtype=float)
        if self.is_constant:
            return np.full(temperature.shape, self.conductivity)

        temps = np.array([t for t, _ in self.conductivity_table])
        values = np.array([k for _, k in self.conductivity_table])
        outside = int(np.count_nonzero((temperature < temps[0]) | (temperature > temps[-1])))
        if outside:
            with _clamp_lock:
                clamp_warnings[self.name] += outside
            logger.debug("k(T) for %s clamped at %d point(s)", self.name, outside)
        return np.interp(temperature, temps, values)


def conductivity_at(material: Material, temperature: float) -> float:
    """
    Evaluate a material's thermal conductivity.

    Args:
        material: Material to evaluate
        temperature: Temperature in kelvin (> 0)

    Returns:
        Conductivity in W/(m K); table models interpolate linearly and clamp
        beyond the table ends.
    """
    if not temperature > 0:
        raise MaterialError(f"temperature must be > 0 K, got {temperature}")
    return float(material.conductivity_array(np.array([temperature]))[0])


@dataclass(frozen=True)
class Phase:
    """
    Voxel content: a base material plus collapsed thin films.

    films holds (material name, film thickness / voxel height) pairs.
    """

    base: str
    films: tuple[tuple[str, float], ...] = ()

    @property
    def name(self) -> str:
        if not self.films:
            return self.base
        return "+".join([self.base] + [f"{m}({r:.4g})" for m, r in self.films])

    def materials(self) -> set[str]:
        return {self.base} | {m for m, _ in self.films}


@dataclass
class MaterialTable:
    """Named collection of materials."""

    materials: dict[str, Material] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.materials

    def __getitem__(self, name: str) -> Material:
        try:
            return self.materials[name]
        except KeyError:
            known = ", ".join(sorted(self.materials)) or "none"
            raise MaterialError(f"unknown material '{name}' (known: {known})") from None

    def all_constant(self, names=None) -> bool:
        names = self.materials if names is None else names
        return all(self[n].is_constant for n in names)

    def check_phases(self, phases) -> None:
        for phase in phases:
            for name in phase.materials():
                self[name]

    def evaluate(
        self,
        phases: tuple[Phase, ...],
        phase_ids: np.ndarray,
        temperature: np.ndarray,
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        In-plane and through-plane conductivity per voxel.

        Args:
            phases: Phase list indexed by phase_ids
            phase_ids: Phase index per voxel (1-D)
            temperature: Temperature per voxel (1-D, kelvin)

        Returns:
            Tuple of (k_inplane, k_through) arrays
        """
        k_xy = np.empty(phase_ids.shape, dtype=float)
        k_z = np.empty(phase_ids.shape, dtype=float)
        for pid in np.unique(phase_ids):
            mask = phase_ids == pid
            phase = phases[pid]
            t = temperature[mask]
            k_base = self[phase.base].conductivity_array(t)
            parallel = k_base.copy()
            series = 1.0 / k_base
            for name, ratio in phase.films:
                k_film = self[name].conductivity_array(t)
                parallel += ratio * k_film
                series += ratio / k_film
            k_xy[mask] = parallel
            k_z[mask] = 1.0 / series

        if not (np.all(np.isfinite(k_xy)) and np.all(np.isfinite(k_z))):
            raise MaterialError("non-finite conductivity evaluated")
        return k_xy, k_z

    def heat_capacity(self, phases: tuple[Phase, ...], phase_ids: np.ndarray) -> np.ndarray:
        """Volumetric heat capacity per voxel, films included (J/(m^3 K))."""
        per_phase = np.array([
            self[p.base].volumetric_heat_capacity
            + sum(r * self[m].volumetric_heat_capacity for m, r in p.films)
            for p in phases
        ])
        return per_phase[phase_ids]

    @classmethod
    def from_dict(cls, data: dict) -> "MaterialTable":
        """
        Build a table from its JSON form.

        Each entry needs a name, either "conductivity" or "conductivity_table"
        ([[T_K, k], ...]), and either "volumetric_heat_capacity" or
        "density" + "specific_heat".
        """
        try:
            return cls._from_dict(data)
        except PARSE_ERRORS as e:
            raise MaterialError(f"invalid materials file: {describe_parse_error(e)}") from e

    @classmethod
    def _from_dict(cls, data: dict) -> "MaterialTable":
        entries = data.get("materials")
        if not isinstance(entries, list):
            raise MaterialError("materials file must contain a 'materials' list")

        materials = {}
        for entry in entries:
            name = entry.get("name")
            if not name:
                raise MaterialError("material entry without a name")
            if name in materials:
                raise MaterialError(f"duplicate material '{name}'")

            capacity = entry.get("volumetric_heat_capacity")
            if capacity is None:
                if "density" not in entry or "specific_heat" not in entry:
                    raise MaterialError(
                        f"material '{name}': give volumetric_heat_capacity or density + specific_heat"
                    )
                capacity = float(entry["density"]) * float(entry["specific_heat"])

            table = tuple(
                (float(t), float(k)) for t, k in entry.get("conductivity_table", [])
            )
            conductivity = entry.get("conductivity")
            materials[name] = Material(
                name=name,
                volumetric_heat_capacity=float(capacity),
                conductivity=None if conductivity is None else float(conductivity),
                conductivity_table=table,
                source=entry.get("source", ""),
            )
        return cls(materials)

    @classmethod
    def from_json(cls, path: str | Path) -> "MaterialTable":
        path = Path(path)
        if not path.exists():
            raise MaterialError(f"materials file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise MaterialError(f"cannot parse materials file {path}: {e}") from e
        except OSError as e:
            raise ArtifactIOError(f"cannot read materials file {path}: {e}") from e
        return cls.from_dict(data)
