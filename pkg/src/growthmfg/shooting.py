"""Two-point boundary-value solve by single shooting.

The transversality conditions require both co-states to vanish at the
horizon.  The map from initial co-states to terminal co-states is smooth
for the benchmark economy, so a damped Newton iteration on that 2x2 system,
with a forward-difference Jacobian, finds the initial co-states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .economy import CostatePair, Economy
from .errors import NonConvergenceError
from .integrator import AgentState, TimeGrid, Trajectory, integrate


@dataclass(frozen=True)
class ShootingConfig:
    residual_tol: float = 1e-8
    max_newton_iters: int = 50
    fd_step: float = 1e-6
    damping_min: float = 1.0 / 64.0
    initial_guess: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.residual_tol <= 0.0:
            raise ValueError("residual_tol must be positive")
        if not 0.0 < self.damping_min <= 1.0:
            raise ValueError("damping_min must lie in (0, 1]")
        if self.fd_step <= 0.0:
            raise ValueError("fd_step must be positive")


class ShootingSolution(NamedTuple):
    costates0: CostatePair
    trajectory: Trajectory
    iterations: int
    residual_norm: float
    residual_history: list


def terminal_map(q0: CostatePair, a0: float, k0: float, price, grid: TimeGrid,
                 economy: Economy) -> CostatePair:
    """Terminal co-states reached from initial state (a0, k0, q0)."""
    traj = integrate(AgentState(a0, k0, q0.q_a, q0.q_k), price, grid, economy)
    return traj.terminal_costates


def _shoot(q: np.ndarray, a0: float, k0: float, price, grid, economy
           ) -> tuple[np.ndarray, Trajectory]:
    traj = integrate(AgentState(a0, k0, q[0], q[1]), price, grid, economy)
    return traj.states[-1, 2:].copy(), traj


def solve_costates(a0: float, k0: float, price, grid: TimeGrid, economy: Economy,
                   config: ShootingConfig = ShootingConfig()) -> ShootingSolution:
    """Find initial co-states so the terminal co-states vanish.

    Damped Newton: a step is accepted only if it decreases the sup-norm
    residual; the damping factor halves from 1 down to ``damping_min``, and
    failure to find a decreasing step raises :class:`NonConvergenceError`
    (carrying the best residual seen) rather than silently continuing.
    """
    q = np.asarray(config.initial_guess, dtype=float)
    r, traj = _shoot(q, a0, k0, price, grid, economy)
    rnorm = float(np.max(np.abs(r)))
    history = [rnorm]
    best = rnorm
    for it in range(config.max_newton_iters):
        if rnorm < config.residual_tol:
            return ShootingSolution(CostatePair(q[0], q[1]), traj, it, rnorm, history)
        # Forward-difference 2x2 Jacobian of the terminal map.
        jac = np.empty((2, 2))
        for dim in range(2):
            qp = q.copy()
            qp[dim] += config.fd_step
            rp, _ = _shoot(qp, a0, k0, price, grid, economy)
            jac[:, dim] = (rp - r) / config.fd_step
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        if det == 0.0 or not np.isfinite(det):
            raise NonConvergenceError(best, it, "singular shooting Jacobian")
        step = np.array([
            -(jac[1, 1] * r[0] - jac[0, 1] * r[1]) / det,
            -(jac[0, 0] * r[1] - jac[1, 0] * r[0]) / det,
        ])
        lam = 1.0
        accepted = False
        while lam >= config.damping_min:
            q_try = q + lam * step
            r_try, traj_try = _shoot(q_try, a0, k0, price, grid, economy)
            rnorm_try = float(np.max(np.abs(r_try)))
            if rnorm_try < rnorm:
                q, r, rnorm, traj = q_try, r_try, rnorm_try, traj_try
                history.append(rnorm)
                best = min(best, rnorm)
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            raise NonConvergenceError(
                best, it + 1,
                "no damping factor decreased the shooting residual")
    if rnorm < config.residual_tol:
        return ShootingSolution(CostatePair(q[0], q[1]), traj,
                                config.max_newton_iters, rnorm, history)
    raise NonConvergenceError(best, config.max_newton_iters)
