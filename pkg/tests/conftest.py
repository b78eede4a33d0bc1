"""Shared fixtures, oracles, and the acceptance-criteria summary table."""

import numpy as np
import pytest

from growthmfg.economy import ConsumptionLaw, benchmark_economy
from growthmfg.equilibrium import PriceCurve
from growthmfg.integrator import TimeGrid
from growthmfg.population import CompactTestFunction


@pytest.fixture(scope="session")
def econ_paper():
    return benchmark_economy(ConsumptionLaw.PAPER_LITERAL)


@pytest.fixture(scope="session")
def econ_legendre():
    return benchmark_economy(ConsumptionLaw.LEGENDRE_EXACT)


@pytest.fixture(scope="session")
def unit_price():
    return PriceCurve.constant(1.0, 1.0, 16)


@pytest.fixture(scope="session")
def grid200():
    return TimeGrid(1.0, 200)


def gradient_fd_worst_error(economy, law, n_points, seed, step=1e-6):
    """Worst scaled deviation between hamiltonian_grad and central finite
    differences of hamiltonian over random points.

    Points are drawn with q_a in [0.1, 5] at least 1e-3 away from the branch
    kink at q_a = 2, and a, k >= 0.2 so the differencing never crosses the
    utility seam.  Error is |fd - analytic| / max(1, |analytic|).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        a, k = rng.uniform(0.2, 3.0, 2)
        q_k = rng.uniform(0.0, 3.0)
        p = rng.uniform(0.2, 2.0)
        q_a = rng.uniform(0.1, 5.0)
        while abs(q_a - 2.0) <= 1e-3 + step:
            q_a = rng.uniform(0.1, 5.0)
        point = np.array([a, k, q_a, q_k])
        analytic = economy.hamiltonian_grad(a, k, q_a, q_k, p, law)
        for dim in range(4):
            hi = point.copy()
            lo = point.copy()
            hi[dim] += step
            lo[dim] -= step
            fd = (economy.hamiltonian(hi[0], hi[1], hi[2], hi[3], p, law)
                  - economy.hamiltonian(lo[0], lo[1], lo[2], lo[3], p, law)
                  ) / (2.0 * step)
            err = abs(fd - analytic[dim]) / max(1.0, abs(analytic[dim]))
            worst = max(worst, err)
    return worst


def smooth_bump_phi():
    """phi(a, k, t) = b(t) a k with a C-infinity bump b supported on (0, 1)
    (all derivatives vanish at the endpoints)."""

    def b(t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0.0) & (t < 1.0)
        safe = np.where(inside, t * (1.0 - t), 0.25)
        return np.where(inside, np.exp(1.0 - 0.25 / safe), 0.0)

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


def quartic_bump_phi():
    """phi = b(t) a k with the polynomial bump b = (4 t (1-t))^2.

    b and b' vanish at the endpoints but b'' does not, so the trapezoidal
    quadrature error has a genuine dt^2 leading term: this is the test
    function for observing the second-order decay rate.
    """

    def b(t):
        t = np.asarray(t, dtype=float)
        return (4.0 * t * (1.0 - t)) ** 2

    def b_prime(t):
        t = np.asarray(t, dtype=float)
        return 32.0 * t * (1.0 - t) * (1.0 - 2.0 * t)

    return CompactTestFunction(
        value=lambda a, k, t: b(t) * a * k,
        d_a=lambda a, k, t: b(t) * k,
        d_k=lambda a, k, t: b(t) * a,
        d_t=lambda a, k, t: b_prime(t) * a * k,
    )


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion printed after the run

_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::test_criterion_", 1)[-1]
        if hasattr(report, "wasxfail"):
            outcome = "FAIL (expected, structural)" if report.skipped else "PASS (unexpected)"
        else:
            outcome = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE_RESULTS[name] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {name}: {_ACCEPTANCE_RESULTS[name]}")
