"""
Steady-state solve with a Picard loop for temperature-dependent k.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConvergenceError, SolverError
from ..model.grid import VoxelGrid
from ..model.materials import MaterialTable
from ..model.scenario import ScenarioSpec, scenario_hash
from .assembly import Discretization, assemble_steady, discretize
from .linear import DEFAULT_TOLERANCE, solve_linear

logger = logging.getLogger(__name__)

DEFAULT_PICARD_TOLERANCE = 1e-6
DEFAULT_PICARD_ITERATIONS = 100


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and limits shared by steady and transient solves."""

    linear_tolerance: float = DEFAULT_TOLERANCE
    max_linear_iterations: int | None = None
    picard_tolerance: float = DEFAULT_PICARD_TOLERANCE
    max_picard_iterations: int = DEFAULT_PICARD_ITERATIONS
    damping: float = 1.0

    def __post_init__(self):
        if not self.linear_tolerance > 0 or not self.picard_tolerance > 0:
            raise ValueError("tolerances must be > 0")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must be in (0, 1]")


@dataclass(frozen=True, eq=False)
class TemperatureField:
    """Solved temperatures on the active grid (NaN on void voxels)."""

    grid: VoxelGrid
    values: np.ndarray
    scenario_hash: str = ""
    picard_iterations: int = 0
    linear_iterations: tuple[int, ...] = ()
    residuals: tuple[float, ...] = ()
    history: tuple[float, ...] = field(default=())

    @property
    def solid_values(self) -> np.ndarray:
        return self.values[~np.isnan(self.values)]

    @property
    def max(self) -> float:
        return float(self.solid_values.max())

    @property
    def min(self) -> float:
        return float(self.solid_values.min())

    def metadata(self) -> dict:
        return {
            "scenario_hash": self.scenario_hash,
            "picard_iterations": self.picard_iterations,
            "linear_iterations": list(self.linear_iterations),
            "residuals": list(self.residuals),
            "picard_history": list(self.history),
        }


def field_from_flat(disc: Discretization, flat: np.ndarray, **meta) -> TemperatureField:
    values = flat.reshape(disc.grid.shape).copy()
    values.setflags(write=False)
    return TemperatureField(grid=disc.grid, values=values, **meta)


def solve_discretized(
    disc: Discretization,
    settings: SolverSettings = SolverSettings(),
    initial: np.ndarray | None = None,
    scenario_id: str = "",
) -> TemperatureField:
    """
    Picard iteration on an existing discretization.

    Args:
        disc: Discretization
        settings: Solver tolerances
        initial: Optional flat temperature array to start from
        scenario_id: Hash stored in the result

    Returns:
        Converged TemperatureField
    """
    temperature = disc.uniform_temperature() if initial is None else initial.copy()
    theta = disc.rise(temperature)
    linear_iterations, residuals, history = [], [], []

    iterations = 1 if disc.constant_k else settings.max_picard_iterations
    for picard in range(1, iterations + 1):
        system = assemble_steady(disc, temperature)
        solution = solve_linear(
            system,
            tolerance=settings.linear_tolerance,
            max_iterations=settings.max_linear_iterations,
            x0=theta,
        )
        linear_iterations.append(solution.iterations)
        residuals.append(solution.residual)

        new_theta = theta + settings.damping * (solution.x - theta)
        change = float(np.max(np.abs(new_theta - theta))) if theta.size else 0.0
        theta = new_theta
        temperature = disc.voxel_temperatures(theta)
        history.append(change)
        if np.any(~np.isfinite(theta)):
            raise SolverError("non-finite temperature in the Picard loop")
        if disc.constant_k:
            break
        logger.debug("Picard %d: max change %.3e K (%d CG)", picard, change, solution.iterations)
        if change <= settings.picard_tolerance:
            break
    else:
        raise ConvergenceError(
            f"Picard iteration did not converge in {iterations} iterations "
            f"(last change {history[-1]:.3e} K)",
            residual=history[-1],
            history=history,
        )

    logger.info(
        "Steady solve: %d unknowns, %d Picard iteration(s), %d CG iterations, T max %.3f K",
        disc.n_unknowns, len(history), sum(linear_iterations), np.nanmax(temperature),
    )
    return field_from_flat(
        disc,
        temperature,
        scenario_hash=scenario_id,
        picard_iterations=len(history),
        linear_iterations=tuple(linear_iterations),
        residuals=tuple(residuals),
        history=tuple(history),
    )


def solve_steady(
    grid: VoxelGrid,
    scenario: ScenarioSpec,
    materials: MaterialTable,
    settings: SolverSettings = SolverSettings(),
) -> TemperatureField:
    """
    Steady temperature field of a scenario.

    Assembles with k(T_prev), solves, and repeats until the largest change is
    below the Picard tolerance. All-constant-k material sets run exactly one
    iteration.
    """
    disc = discretize(grid, scenario, materials)
    return solve_discretized(disc, settings, scenario_id=scenario_hash(grid, scenario, materials))
