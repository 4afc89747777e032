"""
Backward-Euler transient conduction.

Each step solves (M/dt + K) T_{n+1} = M/dt T_n + b with k(T) refreshed
from T_n (semi-implicit).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..errors import SolverError
from ..model.grid import VoxelGrid
from ..model.materials import MaterialTable
from ..model.scenario import ScenarioSpec, scenario_hash
from .assembly import LinearSystem, assemble_steady, discretize
from .linear import solve_linear
from .probes import probe
from .steady import SolverSettings, TemperatureField, field_from_flat

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 100


@dataclass(frozen=True, eq=False)
class TransientTrace:
    """Probe statistics sampled at every time step."""

    times: np.ndarray
    probes: dict[str, np.ndarray]
    dt: float
    scheme: str = "backward-euler"
    status: str = "ok"
    scenario_hash: str = ""
    snapshots: tuple[tuple[float, TemperatureField], ...] = field(default=())
    final: TemperatureField | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def metadata(self) -> dict:
        return {
            "scheme": self.scheme,
            "dt": self.dt,
            "steps": int(self.times.size - 1),
            "status": self.status,
            "scenario_hash": self.scenario_hash,
        }


def run_transient(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials: MaterialTable,
    t_end: float,
    dt: float,
    initial: TemperatureField | None = None,
    settings: SolverSettings = SolverSettings(),
    snapshot_every: int = 0,
) -> TransientTrace:
    """
    Step response of a scenario.

    Args:
        grid: Device grid
        scenario: Sources switch on at t = 0
        materials: Material table
        t_end: End time (s)
        dt: Fixed step (s)
        initial: Initial field (default uniform ambient / boundary temperatures)
        settings: Linear solver tolerance
        snapshot_every: Keep a field snapshot every N steps (0 = none)

    Returns:
        TransientTrace; a failing linear solve truncates it with an error status
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if not t_end > 0:
        raise ValueError("t_end must be > 0")

    disc = discretize(grid, scenario, materials)
    run_id = scenario_hash(grid, scenario, materials)
    mass = disc.capacity() / dt

    temperature = (
        disc.uniform_temperature() if initial is None else initial.values.ravel().copy()
    )
    theta = disc.rise(temperature)
    steps = int(np.ceil(t_end / dt - 1e-9))

    def sample(flat: np.ndarray) -> dict[str, float]:
        current = field_from_flat(disc, flat)
        return {p.name: probe(current, p.region, p.statistic) for p in scenario.probes}

    times = [0.0]
    samples = {p.name: [v] for p, v in zip(scenario.probes, sample(temperature).values())}
    snapshots = []
    status = "ok"
    system = None

    for step in range(1, steps + 1):
        if system is None or not disc.constant_k:
            steady = assemble_steady(disc, temperature)
            matrix = steady.matrix + sparse.diags(mass)
            system = LinearSystem(
                matrix=matrix.tocsr(),
                rhs=steady.rhs,
                unknown_voxels=steady.unknown_voxels,
                unknown_index=steady.unknown_index,
            )
        stepped = LinearSystem(
            matrix=system.matrix,
            rhs=system.rhs + mass * theta,
            unknown_voxels=system.unknown_voxels,
            unknown_index=system.unknown_index,
        )
        try:
            solution = solve_linear(
                stepped,
                tolerance=settings.linear_tolerance,
                max_iterations=settings.max_linear_iterations,
                x0=theta,
            )
        except SolverError as e:
            status = f"error at step {step}: {e}"
            logger.error("Transient truncated: %s", status)
            break

        theta = solution.x
        temperature = disc.voxel_temperatures(theta)
        times.append(step * dt)
        for name, value in sample(temperature).items():
            samples[name].append(value)
        if snapshot_every and step % snapshot_every == 0:
            snapshots.append((step * dt, field_from_flat(disc, temperature, scenario_hash=run_id)))
        if step % PROGRESS_EVERY == 0:
            logger.info("Transient step %d/%d (t = %.4g s)", step, steps, step * dt)

    return TransientTrace(
        times=np.array(times),
        probes={name: np.array(values) for name, values in samples.items()},
        dt=dt,
        status=status,
        scenario_hash=run_id,
        snapshots=tuple(snapshots),
        final=field_from_flat(disc, temperature, scenario_hash=run_id),
    )
