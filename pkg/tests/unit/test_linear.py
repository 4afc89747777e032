"""Unit tests for the preconditioned CG solver."""

import numpy as np
import pytest
from scipy import sparse
from scipy.linalg import lu_factor, lu_solve

from mtcsim.errors import ConvergenceError, SingularSystemError
from mtcsim.model.grid import VoxelGrid
from mtcsim.model.materials import Material, MaterialTable
from mtcsim.model.scenario import FixedBoundary, ScenarioSpec, Source
from mtcsim.solver.assembly import LinearSystem, assemble_steady, discretize
from mtcsim.solver.linear import solve_linear

RANDOM_MATERIALS = MaterialTable({
    "a": Material("a", 1e6, conductivity=1.0),
    "b": Material("b", 1e6, conductivity=10.0),
    "c": Material("c", 1e6, conductivity=50.0),
})


def random_system(seed: int) -> LinearSystem:
    """Stencil system of a random block with mixed conductivities."""
    rng = np.random.default_rng(seed)
    shape = tuple(int(n) for n in rng.integers(2, 11, size=3))
    names = rng.choice(np.array(["a", "b", "c"], dtype=object), size=shape)
    spacing = tuple(float(s) for s in rng.uniform(1e-6, 2e-6, size=3))
    grid = VoxelGrid.from_materials(names, spacing)
    scenario = ScenarioSpec(
        sources=(Source("bulk", "all", float(rng.uniform(1e-6, 1e-4))),),
        boundaries=(
            FixedBoundary(temperature=300.0, faces=("xmin",)),
            FixedBoundary(temperature=float(rng.uniform(300.0, 400.0)), faces=("zmax",)),
        ),
    )
    return assemble_steady(discretize(grid, scenario, RANDOM_MATERIALS))


@pytest.mark.unit
class TestSolveLinear:
    """Test CG against a dense direct solve."""

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_dense_elimination(self, seed):
        system = random_system(seed)
        assert system.size <= 1000
        solution = solve_linear(system, tolerance=1e-15)
        dense = system.matrix.toarray()
        expected = lu_solve(lu_factor(dense), system.rhs)
        assert np.max(np.abs(solution.x - expected)) < 1e-8

    def test_deterministic(self):
        system = random_system(99)
        first = solve_linear(system)
        second = solve_linear(system)
        assert np.array_equal(first.x, second.x)
        assert first.iterations == second.iterations

    def test_zero_rhs(self):
        system = random_system(3)
        zero = LinearSystem(system.matrix, np.zeros(system.size), system.unknown_voxels,
                            system.unknown_index)
        solution = solve_linear(zero)
        assert solution.iterations == 0
        assert not solution.x.any()

    def test_warm_start_at_solution(self):
        system = random_system(4)
        exact = solve_linear(system, tolerance=1e-13).x
        assert solve_linear(system, x0=exact).iterations == 0

    def test_iteration_cap(self):
        system = random_system(5)
        with pytest.raises(ConvergenceError) as excinfo:
            solve_linear(system, tolerance=1e-14, max_iterations=1)
        assert excinfo.value.residual > 1e-14

    def test_non_positive_diagonal(self):
        matrix = sparse.csr_matrix(np.array([[-1.0, 0.0], [0.0, 1.0]]))
        system = LinearSystem(matrix, np.ones(2), np.arange(2), np.arange(2))
        with pytest.raises(SingularSystemError):
            solve_linear(system)

    def test_breakdown_maps_to_singular(self, mocker):
        system = random_system(6)
        mocker.patch("mtcsim.solver.linear.cg", return_value=(np.zeros(system.size), -1))
        with pytest.raises(SingularSystemError):
            solve_linear(system)

    def test_reports_iterations_and_residual(self):
        system = random_system(7)
        solution = solve_linear(system, tolerance=1e-12)
        assert 0 < solution.iterations <= 10 * system.size
        true_residual = np.linalg.norm(system.rhs - system.matrix @ solution.x)
        assert solution.residual == pytest.approx(true_residual / np.linalg.norm(system.rhs))
        assert solution.residual < 1e-10

    def test_invalid_tolerance(self):
        with pytest.raises(ValueError):
            solve_linear(random_system(1), tolerance=0.0)
