"""Integrator: RK4 order, determinism, divergence detection, field wiring."""

import math

import numpy as np
import pytest

from growthmfg.economy import ConsumptionLaw, benchmark_economy
from growthmfg.equilibrium import PriceCurve
from growthmfg.errors import ConsumptionDomainError, DivergenceError
from growthmfg.integrator import (AgentState, TimeGrid, integrate, rhs,
                                  rk4_path)


class TestTimeGrid:
    def test_basic(self):
        grid = TimeGrid(1.0, 200)
        assert grid.dt == pytest.approx(0.005)
        assert grid.times[0] == 0.0
        assert grid.times[-1] == 1.0
        assert len(grid.times) == 201

    def test_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(0.0, 10)
        with pytest.raises(ValueError):
            TimeGrid(1.0, 0)


class TestGenericRK4:
    def test_exponential_decay(self):
        # dk/dt = -k/2, k(0) = 1: k(1) = exp(-1/2).
        path = rk4_path(lambda t, y: -0.5 * y, [1.0], TimeGrid(1.0, 100))
        assert abs(path[-1, 0] - math.exp(-0.5)) < 1e-8

    def test_fourth_order_on_decay(self):
        exact = math.exp(-0.5)
        errs = [abs(rk4_path(lambda t, y: -0.5 * y, [1.0],
                             TimeGrid(1.0, n))[-1, 0] - exact)
                for n in (10, 20)]
        factor = errs[0] / errs[1]
        assert 12.0 <= factor <= 20.0


class TestIntegrate:
    def test_zero_horizon_is_identity(self, econ_paper):
        grid = TimeGrid(1e-12, 1)
        price = PriceCurve.constant(1e-12, 1.0, 16)
        initial = AgentState(1.0, 1.0, 1.0, 1.0)
        traj = integrate(initial, price, grid, econ_paper)
        np.testing.assert_allclose(traj.states[-1], initial.as_array(),
                                   rtol=0, atol=1e-10)

    def test_deterministic(self, econ_paper, unit_price, grid200):
        initial = AgentState(1.0, 1.0, 0.8, 0.6)
        first = integrate(initial, unit_price, grid200, econ_paper)
        second = integrate(initial, unit_price, grid200, econ_paper)
        assert np.array_equal(first.states, second.states)
        assert np.array_equal(first.controls, second.controls)
        assert np.array_equal(first.velocities, second.velocities)

    def test_fourth_order_on_hamiltonian_field(self, econ_paper, unit_price):
        initial = AgentState(1.0, 1.0, 0.8, 0.6)
        ref = integrate(initial, unit_price, TimeGrid(1.0, 3200), econ_paper)
        errs = []
        for n in (50, 100):
            traj = integrate(initial, unit_price, TimeGrid(1.0, n), econ_paper)
            errs.append(np.max(np.abs(traj.states[-1] - ref.states[-1])))
        factor = errs[0] / errs[1]
        assert 12.0 <= factor <= 20.0

    def test_velocities_match_rhs_at_nodes(self, econ_paper, unit_price, grid200):
        traj = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid200,
                         econ_paper)
        rng = np.random.default_rng(11)
        for j in rng.integers(0, grid200.steps + 1, 25):
            expected = rhs(traj.state(int(j)), grid200.times[j], unit_price,
                           econ_paper)
            np.testing.assert_allclose(traj.velocities[j], expected,
                                       rtol=0, atol=0)

    def test_centered_difference_velocity(self, econ_paper, unit_price):
        def cdiff_error(n):
            grid = TimeGrid(1.0, n)
            traj = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid,
                             econ_paper)
            cdiff = (traj.states[2:] - traj.states[:-2]) / (2.0 * grid.dt)
            return np.max(np.abs(cdiff - traj.velocities[1:-1]))

        e100 = cdiff_error(100)
        e400 = cdiff_error(400)
        scale = e100 / (1.0 / 100) ** 2
        assert e400 <= 1.3 * scale * (1.0 / 400) ** 2

    def test_controls_recorded_at_nodes(self, econ_paper, unit_price, grid200):
        from growthmfg.economy import optimal_consumption, optimal_investment

        traj = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid200,
                         econ_paper)
        for j in (0, 57, 200):
            t = grid200.times[j]
            q_a, q_k = traj.states[j, 2], traj.states[j, 3]
            assert traj.controls[j, 0] == optimal_consumption(q_a,
                                                              econ_paper.mode)
            assert traj.controls[j, 1] == pytest.approx(
                optimal_investment(q_a, q_k, unit_price.value(t)), abs=1e-15)

    def test_divergence_detected(self):
        # A long horizon with a coarse step makes RK4 unstable for the
        # decaying capital mode; the blow-up guard must trip.
        econ = benchmark_economy()
        grid = TimeGrid(2000.0, 50)
        price = PriceCurve.constant(2000.0, 1.0, 16)
        with pytest.raises(DivergenceError):
            integrate(AgentState(1.0, 1.0, 0.0, 0.0), price, grid, econ)

    def test_legendre_domain_error_propagates(self, unit_price, grid200):
        econ = benchmark_economy(ConsumptionLaw.LEGENDRE_EXACT)
        with pytest.raises(ConsumptionDomainError):
            integrate(AgentState(1.0, 1.0, -0.5, 0.5), unit_price, grid200, econ)

    def test_sample_interpolates_states(self, econ_paper, unit_price, grid200):
        traj = integrate(AgentState(1.0, 1.0, 0.8, 0.6), unit_price, grid200,
                         econ_paper)
        np.testing.assert_array_equal(traj.sample(0.0), traj.states[0])
        np.testing.assert_array_equal(traj.sample(1.0), traj.states[-1])
        mid = 0.5 * (traj.states[10] + traj.states[11])
        np.testing.assert_allclose(traj.sample(grid200.times[10] + 0.5 * grid200.dt),
                                   mid, rtol=0, atol=1e-14)
        with pytest.raises(ValueError):
            traj.sample(1.5)


class TestRhs:
    def test_zero_costate_point(self, econ_paper, unit_price):
        # With q_a = q_k = 0 the paper-literal consumption is 1 and
        # investment 0, so dk/dt = g, dq_a/dt = -u1'(a), dq_k/dt = -u1'(k).
        from growthmfg.economy import u1_prime

        state = AgentState(0.7, 2.0, 0.0, 0.0)
        vec = rhs(state, 0.3, unit_price, econ_paper)
        assert vec[1] == pytest.approx(econ_paper.depreciation(2.0, 1.0), abs=1e-15)
        assert vec[2] == pytest.approx(-u1_prime(0.7), abs=1e-15)
        assert vec[3] == pytest.approx(-u1_prime(2.0), abs=1e-15)

    def test_investment_zero_at_balanced_costates(self, econ_paper, unit_price):
        # (1, 1, 1, 1) at unit price: i* = 0, dk/dt = g(1) = -1/2.
        vec = rhs(AgentState(1.0, 1.0, 1.0, 1.0), 0.0, unit_price, econ_paper)
        assert vec[1] == pytest.approx(-0.5, abs=1e-15)

    def test_matches_signed_gradient(self, econ_paper, econ_legendre, unit_price):
        rng = np.random.default_rng(5)
        for econ in (econ_paper, econ_legendre):
            for _ in range(50):
                a, k = rng.uniform(0.2, 3.0, 2)
                q_a = rng.uniform(0.1, 4.0)
                q_k = rng.uniform(0.0, 3.0)
                t = rng.uniform(0.0, 1.0)
                state = AgentState(a, k, q_a, q_k)
                vec = rhs(state, t, unit_price, econ)
                grad = econ.hamiltonian_grad(a, k, q_a, q_k,
                                             unit_price.value(t))
                np.testing.assert_allclose(
                    vec, [grad[2], grad[3], -grad[0], -grad[1]],
                    rtol=0, atol=0)
