"""Unit tests for the steady solver."""

import time
from dataclasses import replace

import numpy as np
import pytest

from mtcsim.errors import ConvergenceError
from mtcsim.model.grid import Box, VoxelGrid
from mtcsim.model.scenario import FixedBoundary, ScenarioSpec, Source
from mtcsim.solver.assembly import discretize
from mtcsim.solver.probes import boundary_flux, probe
from mtcsim.solver.steady import SolverSettings, solve_discretized, solve_steady
from tests.conftest import TIGHT, rod_grid, rod_scenario

ROD_LENGTH = 100e-6


@pytest.mark.unit
class TestAnalyticRod:
    """Test 1-D conduction against closed-form solutions."""

    def test_linear_profile(self, constant_materials):
        grid = rod_grid(101, ROD_LENGTH)
        start = time.perf_counter()
        field = solve_steady(grid, rod_scenario(300.0, 400.0), constant_materials, TIGHT)
        elapsed = time.perf_counter() - start

        x = grid.centers(0)
        expected = 300.0 + 100.0 * x / ROD_LENGTH
        assert np.max(np.abs(field.values[:, 0, 0] - expected)) < 1e-9
        assert elapsed < 1.0

    def test_parabola_second_order(self, constant_materials):
        # T = 300 + a x (L - x) for uniform generation Q = 2 a k, k = 10
        a = 4e9
        q = 2 * a * 10.0
        errors = []
        for n in (10, 20, 40, 80):
            grid = rod_grid(n, ROD_LENGTH)
            power = q * ROD_LENGTH * 1e-12
            field = solve_steady(grid, rod_scenario(300.0, 300.0, power), constant_materials, TIGHT)
            x = grid.centers(0)
            exact = 300.0 + a * x * (ROD_LENGTH - x)
            errors.append(np.max(np.abs(field.values[:, 0, 0] - exact)))

        ratios = np.array(errors[:-1]) / np.array(errors[1:])
        assert ratios.min() >= 3.5
        assert ratios.max() <= 4.5

    def test_maximum_principle(self, constant_materials):
        field = solve_steady(rod_grid(25), rod_scenario(300.0, 400.0), constant_materials)
        assert field.min >= 300.0
        assert field.max <= 400.0

    def test_held_material_rod(self, constant_materials):
        names = np.array(["sink", "rod", "sink"], dtype=object).reshape(3, 1, 1)
        grid = VoxelGrid.from_materials(names, (1e-6, 1e-6, 1e-6))
        scenario = ScenarioSpec(
            sources=(Source("middle", Box(1e-6, 2e-6, 0.0, 1e-6), 1e-6),),
            boundaries=(FixedBoundary(temperature=300.0, materials=("sink",)),),
        )
        field = solve_steady(grid, scenario, constant_materials, TIGHT)
        link = 2 * 10.0 * 100.0 / 110.0 * 1e-12 / 1e-6
        assert field.values[1, 0, 0] == pytest.approx(300.0 + 1e-6 / (2 * link), rel=1e-12)
        assert field.values[0, 0, 0] == 300.0


@pytest.mark.unit
class TestHotplateSteady:
    """Test steady solves on the small hot plate."""

    def test_zero_power_is_uniform(self, small_grid, heater_scenario, kt_materials):
        field = solve_steady(small_grid, heater_scenario.with_total_power(0.0), kt_materials)
        assert (field.solid_values == 300.0).all()

    def test_void_is_nan_and_field_read_only(self, small_grid, heater_scenario,
                                             constant_materials):
        field = solve_steady(small_grid, heater_scenario, constant_materials)
        assert np.isnan(field.values[small_grid.void_mask]).all()
        assert not field.values.flags.writeable

    def test_plate_hotter_than_frame(self, small_grid, heater_scenario, constant_materials):
        field = solve_steady(small_grid, heater_scenario, constant_materials)
        plate = field.values[small_grid.region_mask("plate")]
        frame = field.values[small_grid.region_mask("frame")]
        assert plate.min() > frame.max()
        assert field.max == probe(field, "heater", "max")

    def test_constant_k_single_iteration(self, small_grid, heater_scenario, constant_materials):
        field = solve_steady(small_grid, heater_scenario, constant_materials)
        assert field.picard_iterations == 1

    def test_picard_converges_for_k_of_t(self, small_grid, heater_scenario, kt_materials,
                                         constant_materials):
        hot = heater_scenario.with_total_power(10e-3)
        settings = SolverSettings(picard_tolerance=1e-8)
        field = solve_steady(small_grid, hot, kt_materials, settings)
        assert field.picard_iterations > 1
        assert field.history[-1] <= 1e-8
        # Conductivity falls with temperature, so the k(T) plate runs hotter
        linear = solve_steady(small_grid, hot, constant_materials)
        assert probe(field, "sensor") > probe(linear, "sensor")

    def test_damping_reaches_same_fixed_point(self, small_grid, heater_scenario, kt_materials):
        hot = heater_scenario.with_total_power(10e-3)
        plain = solve_steady(small_grid, hot, kt_materials, SolverSettings(picard_tolerance=1e-9))
        damped = solve_steady(
            small_grid, hot, kt_materials, SolverSettings(picard_tolerance=1e-9, damping=0.6)
        )
        assert np.nanmax(np.abs(plain.values - damped.values)) < 1e-6

    def test_picard_cap(self, small_grid, heater_scenario, kt_materials):
        settings = SolverSettings(picard_tolerance=1e-12, max_picard_iterations=1)
        with pytest.raises(ConvergenceError) as excinfo:
            solve_steady(small_grid, heater_scenario.with_total_power(10e-3), kt_materials, settings)
        assert len(excinfo.value.history) == 1

    def test_invalid_settings(self):
        with pytest.raises(ValueError):
            SolverSettings(linear_tolerance=0.0)
        with pytest.raises(ValueError):
            SolverSettings(damping=1.5)

    def test_superposition(self, small_grid, heater_scenario, constant_materials):
        one = solve_steady(small_grid, heater_scenario, constant_materials, TIGHT)
        two = solve_steady(
            small_grid, heater_scenario.with_total_power(2e-3), constant_materials, TIGHT
        )
        solid = ~small_grid.void_mask
        rise_one = one.values[solid] - 300.0
        rise_two = two.values[solid] - 300.0
        plate = rise_one > 0
        assert rise_two[plate] == pytest.approx(2 * rise_one[plate], rel=1e-9)

    @pytest.mark.parametrize("power", [1e-3, 20e-3])
    def test_energy_balance_constant_k(self, small_grid, heater_scenario, constant_materials,
                                       power):
        scenario = heater_scenario.with_total_power(power)
        disc = discretize(small_grid, scenario, constant_materials)
        field = solve_discretized(disc)
        assert boundary_flux(disc, field) == pytest.approx(power, rel=1e-6)

    @pytest.mark.parametrize("power", [1e-3, 20e-3])
    def test_energy_balance_k_of_t(self, small_grid, heater_scenario, kt_materials, power):
        scenario = heater_scenario.with_total_power(power)
        disc = discretize(small_grid, scenario, kt_materials)
        field = solve_discretized(disc)
        assert boundary_flux(disc, field) == pytest.approx(power, rel=1e-4)

    def test_still_air_lowers_temperature(self, small_grid, heater_scenario, constant_materials):
        vacuum = solve_steady(small_grid, heater_scenario, constant_materials)
        air = solve_steady(
            small_grid, replace(heater_scenario, ambient_mode="still-air"), constant_materials
        )
        assert probe(air, "sensor") <= probe(vacuum, "sensor")
