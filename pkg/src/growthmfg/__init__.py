"""N-agent growth-game equilibrium solver.

Per-agent optimal trajectories are computed by shooting on a
four-dimensional Hamiltonian system (goods, capital, and their co-states);
the capital price is a fixed point of a market-clearing adjustment map on a
sampled curve.  The inner RK4 kernel has a compiled backend with a
pure-Python fallback selected at import time (see :mod:`growthmfg.kernel`).
"""

from .economy import (ConsumptionLaw, ControlPair, CostatePair, Economy,
                      benchmark_economy, consumption_slope,
                      optimal_consumption, optimal_investment, u1, u1_prime)
from .equilibrium import (EquilibriumConfig, EquilibriumReport, PriceCurve,
                          evaluate_price, imbalance, interpolate_price,
                          price_step, solve_equilibrium)
from .errors import ConsumptionDomainError, DivergenceError, NonConvergenceError
from .integrator import AgentState, TimeGrid, Trajectory, integrate, rhs, rk4_path
from .kernel import BACKEND
from .population import (AveragesSeries, CompactTestFunction, Population,
                         averages, grid_population, transport_residual)
from .shooting import ShootingConfig, ShootingSolution, solve_costates, terminal_map

__version__ = "0.1.0"

__all__ = [
    "AgentState", "AveragesSeries", "BACKEND", "CompactTestFunction",
    "ConsumptionDomainError", "ConsumptionLaw", "ControlPair", "CostatePair",
    "DivergenceError", "Economy", "EquilibriumConfig", "EquilibriumReport",
    "NonConvergenceError", "Population", "PriceCurve", "ShootingConfig",
    "ShootingSolution", "TimeGrid", "Trajectory", "averages",
    "benchmark_economy", "consumption_slope", "evaluate_price",
    "grid_population", "imbalance", "integrate", "interpolate_price",
    "optimal_consumption", "optimal_investment", "price_step", "rhs",
    "rk4_path", "solve_costates", "solve_equilibrium", "terminal_map",
    "transport_residual", "u1", "u1_prime",
]
