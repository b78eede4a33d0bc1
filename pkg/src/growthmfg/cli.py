"""Command-line interface: experiment execution, artifact serialization,
and validation subcommands.

Subcommands:

    run                 solve the equilibrium and write CSV/JSON artifacts
    validate            run the built-in numerical check suites
    oracle-consumption  tabulate both consumption rules against a
                        brute-force maximizer

Every configuration key defaults to the reference experiment (25 agents on
[0.5, 1.5]^2, T = 1, mu = 0.8, unit initial price), so a bare ``run``
reproduces it.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import kernel
from .economy import (ConsumptionLaw, Economy, benchmark_economy,
                      optimal_consumption, u1)
from .equilibrium import (EquilibriumConfig, PriceCurve, solve_equilibrium)
from .errors import (ConsumptionDomainError, DivergenceError,
                     NonConvergenceError)
from .integrator import TimeGrid, rk4_path
from .population import (CompactTestFunction, Population, averages,
                         grid_population, transport_residual)
from .shooting import ShootingConfig, solve_costates

_FMT = "{:.12g}"


@dataclass
class RunConfig:
    """Flat experiment configuration; defaults reproduce the benchmark."""

    horizon: float = 1.0
    n_steps: int = 200
    agents_side: int = 5
    a_min: float = 0.5
    a_max: float = 1.5
    k_min: float = 0.5
    k_max: float = 1.5
    price_samples: int = 16
    mu: float = 0.8
    imbalance_tol: float = 1e-3
    max_price_iters: int = 50
    law: str = "paper"
    theta_coeff: float = 1.0
    xi_coeff: float = 0.1
    depreciation_rate: float = 0.5
    residual_tol: float = 1e-8
    max_newton_iters: int = 50
    fd_step: float = 1e-6
    damping_min: float = 1.0 / 64.0
    initial_price: float = 1.0
    output_dir: str = "."
    emit_plot_data: bool = False

    @classmethod
    def from_mapping(cls, mapping: dict) -> "RunConfig":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            if key not in known:
                raise ValueError(f"unknown configuration key: {key!r}")
            kwargs[key] = _coerce(raw, known[key], key)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        mapping = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in stripped.split("=", 1))
            mapping[key] = value
        return cls.from_mapping(mapping)

    def to_mapping(self) -> dict:
        return asdict(self)

    def validated(self) -> "RunConfig":
        problems = []
        if self.horizon <= 0:
            problems.append("horizon must be positive")
        if self.n_steps < 1:
            problems.append("n_steps must be >= 1")
        if self.agents_side < 1:
            problems.append("agents_side must be >= 1")
        if self.a_max < self.a_min or self.k_max < self.k_min:
            problems.append("agent ranges are inverted")
        if self.initial_price <= 0:
            problems.append("initial_price must be positive")
        if self.law not in ("paper", "legendre"):
            problems.append(f"law must be 'paper' or 'legendre', got {self.law!r}")
        if problems:
            raise ValueError("; ".join(problems))
        # Delegated validation (raises ValueError on bad values).
        self.economy()
        self.equilibrium_config()
        self.shooting_config()
        self.grid()
        return self

    def economy(self) -> Economy:
        return Economy(theta_coeff=self.theta_coeff, xi_coeff=self.xi_coeff,
                       depreciation_rate=self.depreciation_rate,
                       mode=ConsumptionLaw(self.law))

    def grid(self) -> TimeGrid:
        return TimeGrid(self.horizon, self.n_steps)

    def population(self) -> Population:
        return grid_population(self.agents_side, (self.a_min, self.a_max),
                               (self.k_min, self.k_max))

    def equilibrium_config(self) -> EquilibriumConfig:
        return EquilibriumConfig(mu=self.mu, imbalance_tol=self.imbalance_tol,
                                 max_price_iters=self.max_price_iters,
                                 m=self.price_samples)

    def shooting_config(self) -> ShootingConfig:
        return ShootingConfig(residual_tol=self.residual_tol,
                              max_newton_iters=self.max_newton_iters,
                              fd_step=self.fd_step,
                              damping_min=self.damping_min)


def _coerce(raw, annotation, key):
    target = {"float": float, "int": int, "str": str, "bool": bool}[annotation]
    if isinstance(raw, str):
        raw = raw.strip()
        if target is bool:
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"{key}: cannot parse {raw!r} as a flag")
        return target(raw)
    if target is bool:
        return bool(raw)
    if target is float:
        return float(raw)
    if target is int:
        if isinstance(raw, float) and not raw.is_integer():
            raise ValueError(f"{key}: expected an integer, got {raw!r}")
        return int(raw)
    return str(raw)


def _write_csv(path: Path, header: str, rows) -> None:
    with path.open("w", newline="") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(
                cell if isinstance(cell, str) else _FMT.format(cell)
                for cell in row) + "\n")


def _exact_kbar(config: RunConfig, times: np.ndarray, k_bar0: float) -> np.ndarray:
    rate = config.xi_coeff - config.depreciation_rate
    return k_bar0 * np.exp(rate * times)


def run(config: RunConfig) -> int:
    """Solve the equilibrium and write price.csv, trajectories.csv,
    averages.csv and report.json to the output directory."""
    config.validated()
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    economy = config.economy()
    grid = config.grid()
    population = config.population()
    price0 = PriceCurve.constant(grid.horizon, config.initial_price,
                                 config.price_samples)
    started = time.perf_counter()
    try:
        report = solve_equilibrium(population, economy, grid,
                                   config.equilibrium_config(),
                                   config.shooting_config(), price0)
    except (NonConvergenceError, DivergenceError, ConsumptionDomainError) as exc:
        diagnostic = {
            "error": type(exc).__name__,
            "message": str(exc),
            "converged": False,
            "config": config.to_mapping(),
        }
        (out / "report.json").write_text(json.dumps(diagnostic, indent=2) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - started

    times = grid.times
    if report.trajectories:
        series = averages(report.trajectories, population)
        kbar_exact = _exact_kbar(config, times, float(series.k_bar[0]))
        kbar_sup_error = float(np.max(np.abs(series.k_bar - kbar_exact)))
        avg_rows = zip(times, series.a_bar, series.k_bar, series.c_bar,
                       series.i_bar)
    else:
        # Zero-iteration budget: the initial price is echoed and there are
        # no solved trajectories to aggregate.
        series = None
        kbar_exact = None
        kbar_sup_error = None
        avg_rows = ()

    _write_csv(out / "price.csv", "t,p",
               zip(report.price.nodes, report.price.samples))
    _write_csv(
        out / "trajectories.csv", "agent,t,a,k,q_a,q_k,c,i",
        ((str(idx), t, *traj.states[j], *traj.controls[j])
         for idx, traj in enumerate(report.trajectories)
         for j, t in enumerate(times)))
    _write_csv(out / "averages.csv", "t,a_bar,k_bar,c_bar,i_bar", avg_rows)

    payload = {
        "converged": report.converged,
        "iterations": report.iterations,
        "imbalance_history": report.imbalance_history,
        "final_imbalance_sup": (report.imbalance_history[-1]
                                if report.imbalance_history else None),
        "final_update_norm": (report.update_norms[-1]
                              if report.update_norms else None),
        "kbar_sup_error": kbar_sup_error,
        "backend": kernel.BACKEND,
        "wall_time_seconds": wall,
        "config": config.to_mapping(),
    }
    (out / "report.json").write_text(json.dumps(payload, indent=2) + "\n")

    if config.emit_plot_data:
        dense = np.linspace(0.0, grid.horizon, 257)
        _write_csv(out / "plot_price.csv", "t,p",
                   ((t, report.price.value(t)) for t in dense))
        _write_csv(out / "plot_trajectories.csv", "agent,t,a,k",
                   ((str(idx), t, traj.states[j, 0], traj.states[j, 1])
                    for idx, traj in enumerate(report.trajectories)
                    for j, t in enumerate(times)))
        _write_csv(out / "plot_avg_goods.csv", "t,a_bar",
                   zip(times, series.a_bar) if series else ())
        _write_csv(out / "plot_avg_capital.csv", "t,k_bar,k_bar_exact",
                   zip(times, series.k_bar, kbar_exact) if series else ())

    def _num(value):
        return "n/a" if value is None else f"{value:.3e}"

    status = "converged" if report.converged else "not converged"
    print(f"{status} after {report.iterations} iterations; "
          f"sup|iota| = {_num(payload['final_imbalance_sup'])}, "
          f"update norm = {_num(payload['final_update_norm'])}, "
          f"kbar sup error = {_num(kbar_sup_error)} "
          f"[{kernel.BACKEND} backend, {wall:.1f}s]")
    return 0


def golden_section_max(fn, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Argmax of a unimodal function on [lo, hi] by golden-section search."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = fn(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = fn(x1)
    return 0.5 * (lo + hi)


def _consumption_bracket(q_a: float) -> tuple[float, float]:
    # The sqrt-branch stationary point ~ 1/(4 q_a^2) must lie inside.
    return -10.0, max(10.0, 1.0 / (4.0 * q_a * q_a) + 1.0)


def oracle_consumption(q_a_min: float = 0.1, q_a_max: float = 10.0,
                       samples: int = 100, out=None) -> int:
    """Print both consumption rules against the brute-force maximizer of
    c -> u1(c) - q_a c, with deviations."""
    out = sys.stdout if out is None else out
    if not 0.0 < q_a_min < q_a_max:
        print("error: need 0 < min < max", file=sys.stderr)
        return 2
    header = ("q_a,c_paper,c_legendre,c_bruteforce,"
              "dev_paper,dev_legendre")
    print(header, file=out)
    for q_a in np.linspace(q_a_min, q_a_max, samples):
        c_paper = optimal_consumption(q_a, ConsumptionLaw.PAPER_LITERAL)
        c_leg = optimal_consumption(q_a, ConsumptionLaw.LEGENDRE_EXACT)
        lo, hi = _consumption_bracket(q_a)
        c_brute = golden_section_max(lambda c: u1(c) - q_a * c, lo, hi)
        print(",".join(_FMT.format(v) for v in
                       (q_a, c_paper, c_leg, c_brute,
                        abs(c_paper - c_brute), abs(c_leg - c_brute))),
              file=out)
    return 0


# ---------------------------------------------------------------------------
# validation suites


def _suite_gradient(config: RunConfig):
    rng = np.random.default_rng(20240601)
    economy = Economy(theta_coeff=config.theta_coeff, xi_coeff=config.xi_coeff,
                      depreciation_rate=config.depreciation_rate)
    step = config.fd_step
    worst = 0.0
    for law in ConsumptionLaw:
        for _ in range(40):
            a, k = rng.uniform(0.2, 3.0, 2)
            q_k = rng.uniform(0.0, 3.0)
            p = rng.uniform(0.2, 2.0)
            q_a = rng.uniform(0.1, 5.0)
            if abs(q_a - 2.0) < 2e-3:
                q_a = 2.1
            point = np.array([a, k, q_a, q_k])
            analytic = economy.hamiltonian_grad(a, k, q_a, q_k, p, law)
            for dim in range(4):
                hi = point.copy()
                lo = point.copy()
                hi[dim] += step
                lo[dim] -= step
                fd = (economy.hamiltonian(*hi, p, law)
                      - economy.hamiltonian(*lo, p, law)) / (2.0 * step)
                err = abs(fd - analytic[dim]) / max(1.0, abs(analytic[dim]))
                worst = max(worst, err)
    return worst < 1e-6, f"max scaled gradient error {worst:.2e} (fd step {step:g})"


def _suite_rk4_order(config: RunConfig):
    decay = -config.depreciation_rate
    exact = math.exp(decay)
    errors = []
    for steps in (10, 20):
        path = rk4_path(lambda t, y: decay * y, [1.0], TimeGrid(1.0, steps))
        errors.append(abs(path[-1, 0] - exact))
    factor = errors[0] / errors[1]
    return 12.0 <= factor <= 20.0, f"step-halving error factor {factor:.2f}"


def _suite_consumption_oracle(config: RunConfig):
    worst = 0.0
    for q_a in np.geomspace(0.1, 10.0, 50):
        lo, hi = _consumption_bracket(q_a)
        brute = golden_section_max(lambda c: u1(c) - q_a * c, lo, hi)
        worst = max(worst, abs(
            optimal_consumption(q_a, ConsumptionLaw.LEGENDRE_EXACT) - brute))
    return worst < 1e-6, f"max |c* - argmax| {worst:.2e}"


def _suite_spline_knots(config: RunConfig):
    rng = np.random.default_rng(7)
    curve = PriceCurve(1.0, rng.uniform(0.5, 2.0, 17))
    worst = max(abs(curve.value(t) - s)
                for t, s in zip(curve.nodes, curve.samples))
    flat = PriceCurve.constant(1.0, 1.3, 16)
    worst_flat = max(abs(flat.value(t) - 1.3) for t in np.linspace(0, 1, 101))
    ok = worst < 1e-12 and worst_flat < 1e-12
    return ok, f"knot error {worst:.1e}, constant error {worst_flat:.1e}"


def _bump_test_function():
    def b(t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < 1.0)
        safe = np.where(inside, t * (1.0 - t), 0.25)
        val = np.where(inside, np.exp(1.0 - 0.25 / safe), 0.0)
        return val

    def b_prime(t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < 1.0)
        safe = np.where(inside, t * (1.0 - t), 0.25)
        return np.where(inside, b(t) * 0.25 * (1.0 - 2.0 * t) / safe ** 2, 0.0)

    return CompactTestFunction(
        value=lambda a, k, t: b(t) * a * k,
        d_a=lambda a, k, t: b(t) * k,
        d_k=lambda a, k, t: b(t) * a,
        d_t=lambda a, k, t: b_prime(t) * a * k,
    )


def _suite_transport(config: RunConfig):
    grid = TimeGrid(1.0, 400)
    price = PriceCurve.constant(1.0, 1.0, 16)
    sol = solve_costates(1.0, 1.0, price, grid, benchmark_economy())
    residual = abs(transport_residual(_bump_test_function(), [sol.trajectory],
                                      Population(np.array([[1.0, 1.0]]))))
    return residual < 1e-6, f"weak-form residual {residual:.2e} at 400 steps"


def _suite_costates(config: RunConfig):
    grid = TimeGrid(1.0, 200)
    price = PriceCurve.constant(1.0, 1.0, 16)
    sol = solve_costates(1.0, 1.0, price, grid, benchmark_economy())
    qmin = float(sol.trajectory.states[:, 2:].min())
    ok = qmin >= -1e-8 and sol.residual_norm < 1e-8
    return ok, f"min co-state {qmin:.2e}, terminal residual {sol.residual_norm:.2e}"


_SUITES = [
    ("economy-gradient", _suite_gradient),
    ("rk4-order", _suite_rk4_order),
    ("consumption-oracle", _suite_consumption_oracle),
    ("spline-knots", _suite_spline_knots),
    ("transport-residual", _suite_transport),
    ("costate-nonnegativity", _suite_costates),
]


def validate(config: RunConfig) -> int:
    """Run the numerical check suites and print a pass/fail table."""
    config.validated()
    failures = 0
    print(f"{'suite':<24}{'result':<8}detail")
    for name, suite in _SUITES:
        try:
            ok, detail = suite(config)
        except Exception as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        failures += 0 if ok else 1
        print(f"{name:<24}{'PASS' if ok else 'FAIL':<8}{detail}")
    print(f"{len(_SUITES) - failures}/{len(_SUITES)} suites passed "
          f"[{kernel.BACKEND} backend]")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="key = value configuration file")
    parser.add_argument("--output-dir", metavar="PATH")
    parser.add_argument("--law", choices=("paper", "legendre"))
    parser.add_argument("--agents-side", type=int, metavar="N")
    parser.add_argument("--price-samples", type=int, metavar="M")
    parser.add_argument("--mu", type=float, metavar="X")
    parser.add_argument("--tol", type=float, metavar="X",
                        dest="imbalance_tol")
    parser.add_argument("--max-iters", type=int, metavar="N",
                        dest="max_price_iters")
    parser.add_argument("--steps", type=int, metavar="N", dest="n_steps")
    parser.add_argument("--emit-plot-data", action="store_true", default=None)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = (RunConfig.from_file(args.config) if args.config else RunConfig())
    overrides = {
        "output_dir": args.output_dir,
        "law": args.law,
        "agents_side": args.agents_side,
        "price_samples": args.price_samples,
        "mu": args.mu,
        "imbalance_tol": args.imbalance_tol,
        "max_price_iters": args.max_price_iters,
        "n_steps": args.n_steps,
        "emit_plot_data": args.emit_plot_data,
    }
    mapping = config.to_mapping()
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_mapping(mapping)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="growthmfg",
        description="N-agent growth-game equilibrium solver")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="solve and write artifacts")
    _add_run_flags(run_parser)

    val_parser = sub.add_parser("validate", help="run the numerical checks")
    _add_run_flags(val_parser)

    oracle = sub.add_parser("oracle-consumption",
                            help="tabulate consumption rules vs brute force")
    oracle.add_argument("--min", type=float, default=0.1, dest="q_a_min")
    oracle.add_argument("--max", type=float, default=10.0, dest="q_a_max")
    oracle.add_argument("--samples", type=int, default=100)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run(_config_from_args(args))
        if args.command == "validate":
            return validate(_config_from_args(args))
        return oracle_consumption(args.q_a_min, args.q_a_max, args.samples)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
