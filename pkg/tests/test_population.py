"""Populations, aggregates, and the weak-form transport residual."""

import numpy as np
import pytest

from conftest import quartic_bump_phi, smooth_bump_phi
from growthmfg.integrator import AgentState, TimeGrid, integrate
from growthmfg.population import (CompactTestFunction, Population, averages,
                                  grid_population, transport_residual)
from growthmfg.shooting import solve_costates


class TestGridPopulation:
    def test_benchmark_grid(self):
        pop = grid_population(5)
        assert pop.size == 25
        np.testing.assert_allclose(pop.initial_points.mean(axis=0), [1.0, 1.0],
                                   rtol=0, atol=1e-15)
        assert pop.initial_points.min() == 0.5
        assert pop.initial_points.max() == 1.5
        assert pop.weight == pytest.approx(0.04)

    def test_single_agent_midpoint(self):
        pop = grid_population(1, (0.0, 2.0), (1.0, 3.0))
        assert pop.size == 1
        np.testing.assert_array_equal(pop.initial_points, [[1.0, 2.0]])
        assert pop.weight == 1.0

    def test_two_by_two_corners(self):
        pop = grid_population(2, (0.0, 1.0), (0.0, 1.0))
        assert pop.size == 4
        np.testing.assert_allclose(pop.initial_points.mean(axis=0), [0.5, 0.5])
        assert {tuple(p) for p in pop.initial_points} == {
            (0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}

    def test_mass_conservation(self):
        for side in (1, 2, 5):
            pop = grid_population(side)
            assert pop.weights.sum() == pytest.approx(1.0, abs=1e-15)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            grid_population(0)
        with pytest.raises(ValueError):
            grid_population(3, (1.0, 0.0))


@pytest.fixture(scope="module")
def pair_of_trajectories(econ_paper, unit_price, grid200):
    t1 = integrate(AgentState(0.6, 0.8, 0.9, 0.7), unit_price, grid200,
                   econ_paper)
    t2 = integrate(AgentState(1.4, 1.2, 1.1, 0.5), unit_price, grid200,
                   econ_paper)
    return t1, t2


class TestAverages:
    def test_identical_agents(self, econ_paper, unit_price, grid200):
        traj = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid200,
                         econ_paper)
        series = averages([traj, traj], Population(np.array([[1.0, 1.0]] * 2)))
        np.testing.assert_array_equal(series.a_bar, traj.a)
        np.testing.assert_array_equal(series.k_bar, traj.k)
        np.testing.assert_array_equal(series.c_bar, traj.controls[:, 0])
        np.testing.assert_array_equal(series.i_bar, traj.controls[:, 1])

    def test_two_agent_mean(self, pair_of_trajectories):
        t1, t2 = pair_of_trajectories
        series = averages([t1, t2], Population(np.array([[0.6, 0.8],
                                                         [1.4, 1.2]])))
        np.testing.assert_allclose(series.a_bar, 0.5 * (t1.a + t2.a),
                                   rtol=0, atol=1e-15)
        np.testing.assert_allclose(series.k_bar, 0.5 * (t1.k + t2.k),
                                   rtol=0, atol=1e-15)

    def test_linearity_in_subpopulations(self, pair_of_trajectories):
        # Averaging disjoint sub-populations with proper weights equals the
        # full-population average.
        t1, t2 = pair_of_trajectories
        full = averages([t1, t2], Population(np.array([[0.6, 0.8], [1.4, 1.2]])))
        s1 = averages([t1], Population(np.array([[0.6, 0.8]])))
        s2 = averages([t2], Population(np.array([[1.4, 1.2]])))
        np.testing.assert_allclose(full.a_bar, 0.5 * s1.a_bar + 0.5 * s2.a_bar,
                                   rtol=0, atol=1e-15)

    def test_grid_mismatch_rejected(self, econ_paper, unit_price, grid200):
        traj_a = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid200,
                           econ_paper)
        traj_b = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price,
                           TimeGrid(1.0, 100), econ_paper)
        with pytest.raises(ValueError):
            averages([traj_a, traj_b], Population(np.array([[1.0, 1.0]] * 2)))


@pytest.fixture(scope="module")
def solved_400(econ_paper, unit_price):
    grid = TimeGrid(1.0, 400)
    sol = solve_costates(1.0, 1.0, unit_price, grid, econ_paper)
    return sol.trajectory


class TestTransportResidual:
    def test_zero_test_function(self, solved_400):
        zero = CompactTestFunction(
            value=lambda a, k, t: np.zeros_like(t),
            d_a=lambda a, k, t: np.zeros_like(t),
            d_k=lambda a, k, t: np.zeros_like(t),
            d_t=lambda a, k, t: np.zeros_like(t))
        res = transport_residual(zero, [solved_400],
                                 Population(np.array([[1.0, 1.0]])))
        assert res == 0.0

    def test_time_only_test_function_telescopes(self, solved_400):
        bump = smooth_bump_phi()
        time_only = CompactTestFunction(
            value=lambda a, k, t: bump.value(1.0, 1.0, t),
            d_a=lambda a, k, t: np.zeros_like(t),
            d_k=lambda a, k, t: np.zeros_like(t),
            d_t=lambda a, k, t: bump.d_t(1.0, 1.0, t))
        res = transport_residual(time_only, [solved_400],
                                 Population(np.array([[1.0, 1.0]])))
        assert abs(res) < 1e-10

    def test_small_residual_on_solved_trajectory(self, solved_400):
        res = transport_residual(smooth_bump_phi(), [solved_400],
                                 Population(np.array([[1.0, 1.0]])))
        assert abs(res) < 1e-6

    def test_second_order_decay(self, econ_paper, unit_price):
        # The polynomial bump has a genuine dt^2 quadrature term, so halving
        # the step divides the residual by about four.
        phi = quartic_bump_phi()
        pop = Population(np.array([[1.0, 1.0]]))
        residuals = []
        for n in (50, 100, 200):
            traj = integrate(AgentState(1.0, 1.0, 0.5, 0.5), unit_price,
                             TimeGrid(1.0, n), econ_paper)
            residuals.append(abs(transport_residual(phi, [traj], pop)))
        for coarse, fine in zip(residuals, residuals[1:]):
            assert coarse / fine == pytest.approx(4.0, rel=0.4)

    def test_population_size_mismatch(self, solved_400):
        with pytest.raises(ValueError):
            transport_residual(smooth_bump_phi(), [solved_400],
                               Population(np.array([[1.0, 1.0]] * 2)))
