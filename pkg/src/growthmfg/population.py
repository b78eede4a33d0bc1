"""Agent populations, aggregates, and the weak-form transport check.

The population-level distribution is the empirical measure on the N agents'
states (uniform mass 1/N per agent); it is never materialized as a density.
Aggregates are computed directly from the trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .integrator import TimeGrid, Trajectory


@dataclass(frozen=True)
class Population:
    """Initial points (a0, k0) of the N agents, each carrying mass 1/N."""

    initial_points: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.initial_points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("initial_points must be a non-empty (N, 2) array")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "initial_points", pts)

    @property
    def size(self) -> int:
        return self.initial_points.shape[0]

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, self.weight)


def grid_population(side: int, a_range: tuple[float, float] = (0.5, 1.5),
                    k_range: tuple[float, float] = (0.5, 1.5)) -> Population:
    """side x side tensor grid of initial conditions, endpoints included.

    ``side = 1`` places the single agent at the midpoint of both ranges.
    """
    if side < 1:
        raise ValueError(f"side must be >= 1, got {side}")
    for name, (lo, hi) in (("a_range", a_range), ("k_range", k_range)):
        if hi < lo:
            raise ValueError(f"{name} is inverted: ({lo}, {hi})")
    if side == 1:
        a_pts = np.array([0.5 * (a_range[0] + a_range[1])])
        k_pts = np.array([0.5 * (k_range[0] + k_range[1])])
    else:
        a_pts = np.linspace(a_range[0], a_range[1], side)
        k_pts = np.linspace(k_range[0], k_range[1], side)
    points = [(a, k) for a in a_pts for k in k_pts]
    return Population(np.array(points))


@dataclass(frozen=True)
class AveragesSeries:
    """Population means of goods, capital, consumption, and investment."""

    grid: TimeGrid
    a_bar: np.ndarray
    k_bar: np.ndarray
    c_bar: np.ndarray
    i_bar: np.ndarray


def _check_common_grid(trajectories: Sequence[Trajectory]) -> TimeGrid:
    if not trajectories:
        raise ValueError("no trajectories supplied")
    grid = trajectories[0].grid
    for traj in trajectories[1:]:
        if traj.grid != grid:
            raise ValueError(f"trajectory grids differ: {traj.grid} != {grid}")
    return grid


def averages(trajectories: Sequence[Trajectory], population: Population
             ) -> AveragesSeries:
    """Node-wise weighted means over the population (uniform weights)."""
    grid = _check_common_grid(trajectories)
    if len(trajectories) != population.size:
        raise ValueError(
            f"{len(trajectories)} trajectories for {population.size} agents")
    states = np.stack([t.states for t in trajectories])
    controls = np.stack([t.controls for t in trajectories])
    w = population.weights[:, None]
    mean_states = np.sum(w[:, :, None] * states, axis=0)
    mean_controls = np.sum(w[:, :, None] * controls, axis=0)
    return AveragesSeries(
        grid=grid,
        a_bar=mean_states[:, 0],
        k_bar=mean_states[:, 1],
        c_bar=mean_controls[:, 0],
        i_bar=mean_controls[:, 1],
    )


@dataclass(frozen=True)
class CompactTestFunction:
    """Smooth test function phi(a, k, t) with compact support in (0, T),
    supplied with its partial derivatives (no symbolic differentiation).

    Each callable must accept numpy arrays and broadcast.
    """

    value: Callable
    d_a: Callable
    d_k: Callable
    d_t: Callable


def transport_residual(test_fn: CompactTestFunction,
                       trajectories: Sequence[Trajectory],
                       population: Population) -> float:
    """Weak-form residual of the empirical measure against the transport
    equation:

        (1/N) sum_n  integral  [ d_t phi + d_a phi * da/dt + d_k phi * dk/dt ] dt

    by trapezoidal quadrature along each trajectory, with node velocities
    taken from the stored Hamiltonian field.  Vanishes (to quadrature and
    integration accuracy) because the integrand is the total time derivative
    of phi along each path and phi has compact support.
    """
    grid = _check_common_grid(trajectories)
    if len(trajectories) != population.size:
        raise ValueError(
            f"{len(trajectories)} trajectories for {population.size} agents")
    times = grid.times
    total = 0.0
    for traj, w in zip(trajectories, population.weights):
        a, k = traj.a, traj.k
        integrand = (
            test_fn.d_t(a, k, times)
            + test_fn.d_a(a, k, times) * traj.velocities[:, 0]
            + test_fn.d_k(a, k, times) * traj.velocities[:, 1]
        )
        total += w * np.trapezoid(integrand, times)
    return float(total)
