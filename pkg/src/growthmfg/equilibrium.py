"""Sampled price curve, market-clearing imbalance, and the price
fixed-point iteration.

The capital price is represented by m+1 equidistant samples on [0, T] with
a natural cubic spline between them.  The imbalance at time t is the mean
excess of investment demand over capital production,

    iota(t) = (1/N) sum_n [ i*_n(t) - Xi(k_n(t), p(t)) ],

positive when demand exceeds supply.  The adjustment map raises the price
where iota > 0 and lowers it where iota < 0, clamped below at a small
positive floor, and iterates to a fixed point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .economy import Economy, optimal_investment
from .integrator import TimeGrid, Trajectory
from .population import Population
from .shooting import ShootingConfig, solve_costates
from .splines import natural_second_derivatives, spline_value

# Lowest admissible price sample: keeps the capital price positive during
# iteration (a negative price would invert the trade semantics).
PRICE_FLOOR = 1e-6


@dataclass(frozen=True)
class PriceCurve:
    """m+1 equidistant price samples on [0, horizon] with natural cubic
    spline interpolation (exact at the nodes, C^2 in between)."""

    horizon: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float).copy()
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if samples.size < 4:
            raise ValueError(
                f"third-order interpolation needs >= 4 samples, got {samples.size}")
        if np.any(samples < PRICE_FLOOR):
            raise ValueError(f"price samples must be >= {PRICE_FLOOR}")
        second = natural_second_derivatives(samples, self.horizon)
        samples.setflags(write=False)
        second.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "_second_derivs", second)

    @classmethod
    def constant(cls, horizon: float, level: float, m: int = 16) -> "PriceCurve":
        return cls(horizon, np.full(m + 1, float(level)))

    @property
    def m(self) -> int:
        return self.samples.size - 1

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.samples.size)

    @property
    def second_derivs(self) -> np.ndarray:
        return self._second_derivs

    def value(self, t: float) -> float:
        """Interpolated price at ``t``; raises outside [0, horizon]."""
        return spline_value(self.horizon, self.samples, self._second_derivs, t)


def interpolate_price(curve: PriceCurve, t: float) -> float:
    """Spline evaluation of the sampled price curve at time ``t``."""
    return curve.value(t)


@dataclass(frozen=True)
class EquilibriumConfig:
    mu: float = 0.8
    imbalance_tol: float = 1e-3
    max_price_iters: int = 50
    m: int = 16

    def __post_init__(self):
        if self.mu <= 0.0:
            raise ValueError("adjustment gain mu must be positive")
        if self.imbalance_tol <= 0.0:
            raise ValueError("imbalance_tol must be positive")
        if self.max_price_iters < 0:
            raise ValueError("max_price_iters must be >= 0")
        if self.m < 3:
            raise ValueError("need m >= 3 price intervals")


@dataclass
class EquilibriumReport:
    """Outcome of the price fixed-point iteration.

    ``imbalance_history`` holds the sup-norm of iota over the price nodes at
    each iteration.  ``update_norms`` holds the sup-norm of the actual
    (floor-clamped) price update mu*iota at each iteration; it is the
    fixed-point certificate ||Psi(p) - p||_inf and can keep shrinking while
    the raw sup-norm is dominated by nodes pinned at the price floor, where
    no admissible price can absorb the imbalance.
    """

    price: PriceCurve
    trajectories: list = field(default_factory=list)
    costates0: list = field(default_factory=list)
    imbalance_history: list = field(default_factory=list)
    update_norms: list = field(default_factory=list)
    imbalance_nodes: np.ndarray | None = None
    iterations: int = 0
    converged: bool = False
    wall_time: float = 0.0


def imbalance(t: float, price: PriceCurve, agents: Sequence | np.ndarray,
              economy: Economy) -> float:
    """Mean excess investment demand at time ``t``.

    ``agents`` holds the per-agent states at ``t`` as an (N, 4) array (or a
    sequence of state-like 4-vectors): columns (a, k, q_a, q_k).
    """
    if isinstance(agents, np.ndarray):
        states = np.atleast_2d(agents.astype(float))
    else:
        states = np.atleast_2d(np.array(
            [s.as_array() if hasattr(s, "as_array") else np.asarray(s, dtype=float)
             for s in agents]))
    p = price.value(t)
    total = 0.0
    for row in states:
        i_star = optimal_investment(row[2], row[3], p)
        _, xi, _ = economy.production(row[1], p)
        total += i_star - xi
    return total / states.shape[0]


def _imbalance_at_nodes(price: PriceCurve, trajectories: Sequence[Trajectory],
                        economy: Economy) -> np.ndarray:
    """iota at every price node, with agent states sampled from the stored
    trajectories (exact when the node falls on a trajectory node, linear
    interpolation otherwise)."""
    nodes = price.nodes
    iota = np.empty(nodes.size)
    for i, t in enumerate(nodes):
        states = np.stack([traj.sample(t) for traj in trajectories])
        iota[i] = imbalance(t, price, states, economy)
    return iota


def price_step(curve: PriceCurve, iota_at_nodes: np.ndarray, mu: float
               ) -> PriceCurve:
    """One adjustment step: samples + mu * iota, clamped at the price floor."""
    iota = np.asarray(iota_at_nodes, dtype=float)
    if iota.size != curve.samples.size:
        raise ValueError(
            f"need {curve.samples.size} imbalance values, got {iota.size}")
    new = np.maximum(PRICE_FLOOR, curve.samples + mu * iota)
    return PriceCurve(curve.horizon, new)


def solve_equilibrium(population: Population, economy: Economy, grid: TimeGrid,
                      config: EquilibriumConfig = EquilibriumConfig(),
                      shooting: ShootingConfig = ShootingConfig(),
                      initial_price: PriceCurve | None = None
                      ) -> EquilibriumReport:
    """Iterate the price-adjustment map to a market-clearing fixed point.

    Each iteration solves the N shooting problems under the current curve
    (warm-starting every agent from its previous co-states), evaluates the
    imbalance at the price nodes, and applies one price step.  Stops when
    the sup-norm of iota falls below ``imbalance_tol`` or the budget is
    exhausted; the report carries the full history either way.

    Shooting failures propagate as :class:`NonConvergenceError`, since a
    bad agent solve would corrupt the imbalance signal.
    """
    t0 = time.perf_counter()
    if initial_price is None:
        price = PriceCurve.constant(grid.horizon, 1.0, config.m)
    else:
        price = initial_price
        if price.m != config.m:
            raise ValueError(f"initial price has m={price.m}, config wants {config.m}")
    points = population.initial_points
    warm = [shooting.initial_guess] * population.size
    report = EquilibriumReport(price=price)
    for iteration in range(1, config.max_price_iters + 1):
        trajectories = []
        costates0 = []
        for idx in range(population.size):
            sol = solve_costates(
                points[idx, 0], points[idx, 1], price, grid, economy,
                replace(shooting, initial_guess=warm[idx]))
            warm[idx] = (sol.costates0.q_a, sol.costates0.q_k)
            trajectories.append(sol.trajectory)
            costates0.append(sol.costates0)
        iota = _imbalance_at_nodes(price, trajectories, economy)
        sup = float(np.max(np.abs(iota)))
        stepped = price_step(price, iota, config.mu)
        update_norm = float(np.max(np.abs(stepped.samples - price.samples)))
        report.price = price
        report.trajectories = trajectories
        report.costates0 = costates0
        report.imbalance_history.append(sup)
        report.update_norms.append(update_norm)
        report.imbalance_nodes = iota
        report.iterations = iteration
        if sup < config.imbalance_tol:
            report.converged = True
            break
        price = stepped
    report.wall_time = time.perf_counter() - t0
    return report


def evaluate_price(price: PriceCurve, population: Population, economy: Economy,
                   grid: TimeGrid, shooting: ShootingConfig = ShootingConfig()
                   ) -> tuple[np.ndarray, list]:
    """Independent re-evaluation pass: cold-start shooting solves for every
    agent under ``price``, returning (iota at the price nodes, trajectories).

    Used to re-verify a reported fixed point without reusing loop state.
    """
    trajectories = []
    for idx in range(population.size):
        sol = solve_costates(population.initial_points[idx, 0],
                             population.initial_points[idx, 1],
                             price, grid, economy, shooting)
        trajectories.append(sol.trajectory)
    return _imbalance_at_nodes(price, trajectories, economy), trajectories
