"""Benchmark the compiled RK4 kernel against the pure-Python fallback.

Times three workloads with every importable backend:

  1. a single 200-step trajectory integration,
  2. one cold shooting solve (Newton + finite-difference Jacobian),
  3. optionally (--equilibrium) a 25-agent, 30-iteration price fixed-point
     run, which is the production workload.

Run from a built checkout::

    PYTHONPATH=src python benchmarks/compare_backends.py [--equilibrium]
"""

import argparse
import time
from statistics import median

import numpy as np

from growthmfg import kernel
from growthmfg.economy import benchmark_economy
from growthmfg.equilibrium import EquilibriumConfig, PriceCurve, solve_equilibrium
from growthmfg.integrator import AgentState, TimeGrid, integrate
from growthmfg.population import grid_population
from growthmfg.shooting import solve_costates


def time_call(fn, repeats):
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return median(samples)


def bench_integrate(backend_fn, repeats):
    economy = benchmark_economy()
    grid = TimeGrid(1.0, 200)
    price = PriceCurve(1.0, 1.0 + 0.3 * np.sin(np.linspace(0.0, 3.0, 17)))
    initial = AgentState(1.0, 1.0, 0.8, 0.6)
    return time_call(
        lambda: integrate(initial, price, grid, economy, _kernel=backend_fn),
        repeats)


def bench_shooting(backend_name, repeats):
    economy = benchmark_economy()
    grid = TimeGrid(1.0, 200)
    price = PriceCurve.constant(1.0, 1.0, 16)
    with force_backend(backend_name):
        return time_call(
            lambda: solve_costates(1.0, 1.0, price, grid, economy), repeats)


def bench_equilibrium(backend_name):
    economy = benchmark_economy()
    grid = TimeGrid(1.0, 200)
    population = grid_population(5)
    config = EquilibriumConfig(max_price_iters=30)
    with force_backend(backend_name):
        start = time.perf_counter()
        solve_equilibrium(population, economy, grid, config)
        return time.perf_counter() - start


class force_backend:
    """Temporarily route kernel.integrate_states to a named backend."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        self.saved = kernel.integrate_states
        kernel.integrate_states = kernel.available_backends()[self.name]

    def __exit__(self, *exc):
        kernel.integrate_states = self.saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--equilibrium", action="store_true",
                        help="also time the 25-agent fixed-point run")
    args = parser.parse_args()

    backends = kernel.available_backends()
    print(f"available backends: {', '.join(backends)} "
          f"(default: {kernel.BACKEND})\n")

    rows = []
    for name, fn in backends.items():
        reps = 200 if name == "compiled" else 20
        integrate_ms = bench_integrate(fn, reps) * 1e3
        shooting_ms = bench_shooting(name, 10 if name == "compiled" else 3) * 1e3
        row = [name, f"{integrate_ms:8.3f}", f"{shooting_ms:8.1f}"]
        if args.equilibrium:
            row.append(f"{bench_equilibrium(name):8.1f}")
        rows.append(row)

    header = ["backend", "integrate(ms)", "shooting(ms)"]
    if args.equilibrium:
        header.append("equilibrium(s)")
    widths = [max(len(h), 10) for h in header]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)))

    if len(rows) == 2:
        fast = float(rows[[r[0] for r in rows].index("compiled")][1])
        slow = float(rows[[r[0] for r in rows].index("python")][1])
        print(f"\ncompiled kernel speedup on the integration loop: "
              f"{slow / fast:.1f}x")


if __name__ == "__main__":
    main()
