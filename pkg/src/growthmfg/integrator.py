"""Fixed-step RK4 integration of the four-dimensional Hamiltonian system

    da/dt   =  dH/dq_a
    dk/dt   =  dH/dq_k
    dq_a/dt = -dH/da
    dq_k/dt = -dH/dk

over a uniform time grid, with the price supplied by a sampled curve whose
interpolant is evaluated at the exact substage times (t, t + dt/2, t + dt).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernel
from .economy import (ConsumptionLaw, CostatePair, Economy,
                      consumption_profile)
from .errors import ConsumptionDomainError, DivergenceError
from .splines import spline_values

_LAW_CODE = {ConsumptionLaw.PAPER_LITERAL: 0, ConsumptionLaw.LEGENDRE_EXACT: 1}


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``steps`` intervals on [0, horizon]."""

    horizon: float
    steps: int

    def __post_init__(self):
        if self.horizon <= 0.0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.steps < 1:
            raise ValueError(f"need at least one step, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)


@dataclass(frozen=True)
class AgentState:
    """Goods, capital, and the two co-states at one time instant."""

    a: float
    k: float
    q_a: float
    q_k: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.k, self.q_a, self.q_k])

    @classmethod
    def from_array(cls, y: Sequence[float]) -> "AgentState":
        return cls(float(y[0]), float(y[1]), float(y[2]), float(y[3]))


@dataclass(frozen=True)
class Trajectory:
    """One agent's path on a uniform grid.

    ``states`` has shape (steps+1, 4) with columns (a, k, q_a, q_k);
    ``controls`` holds (c*, i*) at every node; ``velocities`` holds the
    Hamiltonian field evaluated at every node (used by the transport-residual
    check, which needs the node velocities without re-supplying the price).
    """

    grid: TimeGrid
    states: np.ndarray
    controls: np.ndarray
    velocities: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def a(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def k(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def q_a(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def q_k(self) -> np.ndarray:
        return self.states[:, 3]

    def state(self, j: int) -> AgentState:
        return AgentState.from_array(self.states[j])

    @property
    def terminal_costates(self) -> CostatePair:
        return CostatePair(float(self.states[-1, 2]), float(self.states[-1, 3]))

    def sample(self, t: float) -> np.ndarray:
        """State at time ``t``, linearly interpolated between grid nodes
        (exact at nodes)."""
        x = t / self.grid.horizon * self.grid.steps
        if x < 0.0 or x > self.grid.steps + 1e-9:
            raise ValueError(f"t = {t!r} outside the trajectory grid")
        j = min(int(x), self.grid.steps - 1)
        w = x - j
        return (1.0 - w) * self.states[j] + w * self.states[j + 1]


def rhs(state: AgentState, t: float, price, economy: Economy) -> np.ndarray:
    """Hamiltonian field at one point: (dH/dq_a, dH/dq_k, -dH/da, -dH/dk)."""
    p = price.value(t)
    dh_da, dh_dk, dh_dqa, dh_dqk = economy.hamiltonian_grad(
        state.a, state.k, state.q_a, state.q_k, p)
    return np.array([dh_dqa, dh_dqk, -dh_da, -dh_dk])


def integrate(initial: AgentState, price, grid: TimeGrid, economy: Economy,
              _kernel: Callable | None = None) -> Trajectory:
    """Integrate the Hamiltonian system forward from ``initial``.

    Raises :class:`DivergenceError` if any component exceeds the blow-up
    limit, and propagates consumption-domain errors from LEGENDRE_EXACT mode.
    ``_kernel`` overrides the backend (used by tests and benchmarks).
    """
    run = kernel.integrate_states if _kernel is None else _kernel
    n = grid.steps
    states = np.empty((n + 1, 4))
    velocities = np.empty((n + 1, 4))
    status, step = run(
        np.ascontiguousarray(initial.as_array()),
        grid.horizon, n,
        price.samples, price.second_derivs,
        economy.theta_coeff, economy.xi_coeff, economy.depreciation_rate,
        _LAW_CODE[economy.mode],
        states, velocities,
    )
    if status == kernel.STATUS_DIVERGED:
        raise DivergenceError(step * grid.dt)
    if status == kernel.STATUS_DOMAIN:
        raise ConsumptionDomainError(
            "q_a left the domain of the exact-Legendre consumption rule "
            "during integration")
    p_nodes = spline_values(price.horizon, price.samples, price.second_derivs,
                            grid.times)
    controls = np.column_stack([
        consumption_profile(states[:, 2], economy.mode),
        states[:, 3] - p_nodes * states[:, 2],
    ])
    return Trajectory(grid=grid, states=states, controls=controls,
                      velocities=velocities)


def rk4_path(field: Callable[[float, np.ndarray], np.ndarray],
             y0: Sequence[float], grid: TimeGrid) -> np.ndarray:
    """Generic classical RK4 over an arbitrary vector field.

    Returns the (steps+1, dim) array of states.  Used for integrator
    validation on problems with known closed-form solutions.
    """
    y = np.asarray(y0, dtype=float)
    out = np.empty((grid.steps + 1, y.size))
    out[0] = y
    dt = grid.dt
    half = 0.5 * dt
    for j in range(grid.steps):
        t = j * dt
        k1 = np.asarray(field(t, y))
        k2 = np.asarray(field(t + half, y + half * k1))
        k3 = np.asarray(field(t + half, y + half * k2))
        k4 = np.asarray(field(t + dt, y + dt * k3))
        y = y + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)
        out[j + 1] = y
    return out
