"""
Finite-volume discretization of div(k grad T) + Q = 0.

Cell-centered voxels, 7-point stencil, harmonic-mean face conductances.
Unknowns are the temperature rises theta = T - T_ref of every non-void,
non-fixed voxel (T_ref is the scenario's ambient temperature), which keeps
the right-hand side source-sized when all boundaries sit at ambient.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, sparse

from ..errors import DisconnectedVoxelError, ScenarioError, SingularSystemError
from ..model.grid import VoxelGrid
from ..model.materials import MaterialTable, Phase
from ..model.scenario import ScenarioSpec, source_density

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Discretization:
    """
    Index maps and boundary data for one (grid, scenario, materials) triple.

    Voxel indices are flat C-order indices into the active grid.
    """

    grid: VoxelGrid
    materials: MaterialTable
    reference_temperature: float
    active: np.ndarray
    fixed_temperature: np.ndarray
    unknown_voxels: np.ndarray
    unknown_index: np.ndarray
    face_voxels: np.ndarray
    face_axes: np.ndarray
    face_temperatures: np.ndarray
    heat: np.ndarray
    constant_k: bool

    @property
    def n_unknowns(self) -> int:
        return int(self.unknown_voxels.size)

    def held_generation(self) -> float:
        """Heat generated inside held voxels (W); it flows straight into the bath."""
        held = ~np.isnan(self.fixed_temperature)
        return math.fsum((self.heat[held] * self.grid.voxel_volume).tolist())

    def voxel_temperatures(self, theta: np.ndarray) -> np.ndarray:
        """Full flat temperature array (NaN on void) from unknown rises."""
        temperature = np.full(self.active.size, np.nan)
        fixed = ~np.isnan(self.fixed_temperature)
        temperature[fixed] = self.fixed_temperature[fixed]
        temperature[self.unknown_voxels] = theta + self.reference_temperature
        return temperature

    def rise(self, temperature: np.ndarray) -> np.ndarray:
        """Unknown rises theta from a full flat temperature array."""
        return temperature[self.unknown_voxels] - self.reference_temperature

    def uniform_temperature(self) -> np.ndarray:
        return self.voxel_temperatures(np.zeros(self.n_unknowns))

    def capacity(self) -> np.ndarray:
        """Heat capacity C*V (J/K) per unknown."""
        phase_ids = self.grid.material_id.ravel()[self.unknown_voxels]
        volumetric = self.materials.heat_capacity(self.grid.phases, phase_ids)
        return volumetric * self.grid.voxel_volume


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Sparse SPD system A theta = b over the unknown voxels."""

    matrix: sparse.csr_matrix
    rhs: np.ndarray
    unknown_voxels: np.ndarray
    unknown_index: np.ndarray

    @property
    def size(self) -> int:
        return int(self.rhs.size)


def active_grid(grid: VoxelGrid, scenario: ScenarioSpec) -> VoxelGrid:
    """Grid actually solved: void filled with the ambient gas in still-air mode."""
    if scenario.ambient_mode == "still-air":
        return grid.fill_void(Phase(scenario.air_material))
    return grid


def _face_voxels(shape: tuple[int, int, int], face: str) -> tuple[np.ndarray, int]:
    axis = "xyz".index(face[0])
    index = [slice(None)] * 3
    index[axis] = 0 if face.endswith("min") else shape[axis] - 1
    flat = np.arange(np.prod(shape)).reshape(shape)[tuple(index)]
    return flat.ravel(), axis


def discretize(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials: MaterialTable,
) -> Discretization:
    """
    Map voxels to unknowns and collect boundary data.

    Raises:
        SingularSystemError: if no fixed-temperature boundary touches the solid
        DisconnectedVoxelError: if some voxels cannot reach a fixed boundary
    """
    heat = source_density(grid, scenario).ravel()
    solved = active_grid(grid, scenario)
    materials.check_phases(solved.phases)

    shape = solved.shape
    active = ~solved.void_mask.ravel()
    base = np.array([p.base for p in solved.phases] or [""], dtype=object)
    phase_ids = solved.material_id.ravel()

    fixed_temperature = np.full(active.size, np.nan)
    face_voxels, face_axes, face_temps = [], [], []
    seen_faces: set[str] = set()
    for boundary in scenario.boundaries:
        selected = np.zeros(active.size, dtype=bool)
        for name in boundary.materials:
            materials[name]
            selected |= active & (base[np.maximum(phase_ids, 0)] == name)
        for region in boundary.regions:
            selected |= solved.region_mask(region).ravel()
        fixed_temperature[selected] = boundary.temperature

        for face in boundary.faces:
            if face in seen_faces:
                raise ScenarioError(f"face '{face}' is declared by more than one boundary")
            seen_faces.add(face)
            voxels, axis = _face_voxels(shape, face)
            voxels = voxels[active[voxels]]
            face_voxels.append(voxels)
            face_axes.append(np.full(voxels.size, axis, dtype=np.int8))
            face_temps.append(np.full(voxels.size, boundary.temperature))

    face_voxels = np.concatenate(face_voxels) if face_voxels else np.zeros(0, dtype=np.int64)
    face_axes = np.concatenate(face_axes) if face_axes else np.zeros(0, dtype=np.int8)
    face_temps = np.concatenate(face_temps) if face_temps else np.zeros(0)

    fixed = ~np.isnan(fixed_temperature)
    keep = ~fixed[face_voxels]
    face_voxels, face_axes, face_temps = face_voxels[keep], face_axes[keep], face_temps[keep]

    unknown = active & ~fixed
    unknown_voxels = np.flatnonzero(unknown)
    unknown_index = np.full(active.size, -1, dtype=np.int64)
    unknown_index[unknown_voxels] = np.arange(unknown_voxels.size)

    _check_connectivity(active.reshape(shape), fixed.reshape(shape), face_voxels, unknown_voxels.size)

    names = set()
    for phase in solved.phases:
        names |= phase.materials()
    disc = Discretization(
        grid=solved,
        materials=materials,
        reference_temperature=scenario.ambient_temperature,
        active=active,
        fixed_temperature=fixed_temperature,
        unknown_voxels=unknown_voxels,
        unknown_index=unknown_index,
        face_voxels=face_voxels,
        face_axes=face_axes,
        face_temperatures=face_temps,
        heat=heat,
        constant_k=materials.all_constant(names),
    )
    absorbed = disc.held_generation()
    if absorbed > 0:
        logger.warning(
            "%s: %.4g W of source power falls on fixed-temperature voxels",
            scenario.name, absorbed,
        )
    logger.debug(
        "Discretized %s: %d unknowns, %d fixed voxels, %d boundary faces",
        scenario.name, disc.n_unknowns, int(fixed.sum()), face_voxels.size,
    )
    return disc


def _check_connectivity(active, fixed, face_voxels, n_unknowns) -> None:
    if n_unknowns == 0:
        return
    anchored = fixed.copy().ravel()
    anchored[face_voxels] = True
    if not anchored.any():
        raise SingularSystemError("no fixed-temperature boundary touches the solid")
    labels, count = ndimage.label(active)
    anchored_labels = np.unique(labels.ravel()[anchored])
    floating = ~np.isin(labels, anchored_labels) & active
    if floating.any():
        raise DisconnectedVoxelError(int(floating.sum()))


def _links(shape: tuple[int, int, int], active: np.ndarray):
    """Pairs of face-adjacent active voxels, per axis."""
    flat = np.arange(active.size).reshape(shape)
    mask = active.reshape(shape)
    for axis in range(3):
        lo = [slice(None)] * 3
        hi = [slice(None)] * 3
        lo[axis] = slice(0, -1)
        hi[axis] = slice(1, None)
        both = mask[tuple(lo)] & mask[tuple(hi)]
        yield axis, flat[tuple(lo)][both], flat[tuple(hi)][both]


def _face_geometry(spacing, axis: int) -> tuple[float, float]:
    """(face area, center distance) for faces normal to axis."""
    dx, dy, dz = spacing
    return {
        0: (dy * dz, dx),
        1: (dx * dz, dy),
        2: (dx * dy, dz),
    }[axis]


def voxel_conductivity(disc: Discretization, temperature: np.ndarray):
    """
    Per-voxel (k_inplane, k_through) at the given flat temperature array.

    Void voxels get NaN.
    """
    k_xy = np.full(disc.active.size, np.nan)
    k_z = np.full(disc.active.size, np.nan)
    idx = np.flatnonzero(disc.active)
    t = temperature[idx]
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise SingularSystemError("linearization temperature must be finite and > 0")
    kx, kz = disc.materials.evaluate(disc.grid.phases, disc.grid.material_id.ravel()[idx], t)
    k_xy[idx] = kx
    k_z[idx] = kz
    return k_xy, k_z


def link_conductances(disc: Discretization, temperature: np.ndarray):
    """
    Harmonic-mean conductances (W/K) of all interior faces.

    Returns:
        Tuple of (first voxel, second voxel, conductance) arrays
    """
    k_xy, k_z = voxel_conductivity(disc, temperature)
    firsts, seconds, values = [], [], []
    for axis, a, b in _links(disc.grid.shape, disc.active):
        k = k_z if axis == 2 else k_xy
        area, distance = _face_geometry(disc.grid.spacing, axis)
        ka, kb = k[a], k[b]
        firsts.append(a)
        seconds.append(b)
        values.append(2.0 * ka * kb / (ka + kb) * area / distance)
    return np.concatenate(firsts), np.concatenate(seconds), np.concatenate(values)


def face_conductances(disc: Discretization, temperature: np.ndarray) -> np.ndarray:
    """Half-cell conductances k*A/(d/2) of the fixed-temperature faces."""
    if disc.face_voxels.size == 0:
        return np.zeros(0)
    k_xy, k_z = voxel_conductivity(disc, temperature)
    out = np.empty(disc.face_voxels.size)
    for axis in range(3):
        sel = disc.face_axes == axis
        area, distance = _face_geometry(disc.grid.spacing, axis)
        k = k_z if axis == 2 else k_xy
        out[sel] = k[disc.face_voxels[sel]] * area / (distance / 2.0)
    return out


def conductance_matrix(disc: Discretization, temperature: np.ndarray) -> sparse.csr_matrix:
    """
    Operator over all active voxels before boundary elimination.

    Symmetric with zero row sums; rows and columns follow the order of the
    active voxels.
    """
    order = np.full(disc.active.size, -1, dtype=np.int64)
    active_idx = np.flatnonzero(disc.active)
    order[active_idx] = np.arange(active_idx.size)
    a, b, g = link_conductances(disc, temperature)
    ia, ib = order[a], order[b]
    rows = np.concatenate([ia, ib, ia, ib])
    cols = np.concatenate([ib, ia, ia, ib])
    vals = np.concatenate([-g, -g, g, g])
    n = active_idx.size
    return sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def assemble_steady(disc: Discretization, temperature: np.ndarray | None = None) -> LinearSystem:
    """
    Assemble the steady system for the unknown rises.

    Args:
        disc: Discretization from discretize()
        temperature: Flat temperature array used only to evaluate k(T);
            defaults to the uniform boundary/ambient field

    Returns:
        LinearSystem with fixed temperatures eliminated into the RHS;
        exterior faces without a boundary are adiabatic
    """
    if temperature is None:
        temperature = disc.uniform_temperature()
    t_ref = disc.reference_temperature
    n = disc.n_unknowns
    index = disc.unknown_index

    a, b, g = link_conductances(disc, temperature)
    ua, ub = index[a], index[b]
    diag = np.zeros(n)
    rhs = disc.heat[disc.unknown_voxels] * disc.grid.voxel_volume

    both = (ua >= 0) & (ub >= 0)
    np.add.at(diag, ua[both], g[both])
    np.add.at(diag, ub[both], g[both])

    # Couplings to held voxels go to the RHS
    for u, other in ((ua, b), (ub, a)):
        sel = (u >= 0) & (index[other] < 0)
        np.add.at(diag, u[sel], g[sel])
        np.add.at(rhs, u[sel], g[sel] * (disc.fixed_temperature[other[sel]] - t_ref))

    gf = face_conductances(disc, temperature)
    uf = index[disc.face_voxels]
    np.add.at(diag, uf, gf)
    np.add.at(rhs, uf, gf * (disc.face_temperatures - t_ref))

    rows = np.concatenate([ua[both], ub[both], np.arange(n)])
    cols = np.concatenate([ub[both], ua[both], np.arange(n)])
    vals = np.concatenate([-g[both], -g[both], diag])
    matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    if n and not np.all(np.isfinite(matrix.data)):
        raise SingularSystemError("non-finite entries in the assembled matrix")
    return LinearSystem(
        matrix=matrix,
        rhs=rhs,
        unknown_voxels=disc.unknown_voxels,
        unknown_index=disc.unknown_index,
    )
