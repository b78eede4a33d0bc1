"""Natural cubic spline on a uniform knot grid.

This is the third-order interpolant used for the sampled price curve.  It is
hand-rolled (rather than delegated to scipy) because the compiled trajectory
kernel evaluates the same spline in C from the raw (samples, second
derivatives) arrays; keeping one canonical formulation in both places makes
the two backends bit-compatible.  The test suite cross-checks it against an
independent library implementation.
"""

from __future__ import annotations

import numpy as np

# Relative slack for clamping grid-generated times that overshoot the
# horizon by a rounding error.
_EDGE_TOL = 1e-9


def natural_second_derivatives(samples: np.ndarray, horizon: float) -> np.ndarray:
    """Second derivatives M_i of the natural cubic spline through
    ``samples`` at m+1 equidistant knots on [0, horizon].

    Natural end conditions: M_0 = M_m = 0.  The interior values solve the
    standard tridiagonal system M_{i-1} + 4 M_i + M_{i+1} = 6 d2_i / h^2
    (Thomas algorithm).
    """
    y = np.asarray(samples, dtype=float)
    m = y.size - 1
    if m < 3:
        raise ValueError(f"need at least 4 samples for a cubic interpolant, got {y.size}")
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    h = horizon / m
    M = np.zeros(m + 1)
    rhs = 6.0 * (y[:-2] - 2.0 * y[1:-1] + y[2:]) / (h * h)
    # Thomas sweep on the (m-1) x (m-1) system with diagonal 4, off-diagonals 1.
    n = m - 1
    diag = np.empty(n)
    g = np.empty(n)
    diag[0] = 4.0
    g[0] = rhs[0]
    for i in range(1, n):
        w = 1.0 / diag[i - 1]
        diag[i] = 4.0 - w
        g[i] = rhs[i] - w * g[i - 1]
    M[n] = g[n - 1] / diag[n - 1]
    for i in range(n - 1, 0, -1):
        M[i] = (g[i - 1] - M[i + 1]) / diag[i - 1]
    return M


def spline_value(horizon: float, samples: np.ndarray, second_derivs: np.ndarray,
                 t: float) -> float:
    """Evaluate the natural cubic spline at ``t`` in [0, horizon].

    ``t`` outside the interval by up to a rounding tolerance is clamped;
    anything further out raises.  The arithmetic here is mirrored verbatim
    by the compiled kernel.
    """
    slack = _EDGE_TOL * (1.0 + abs(horizon))
    if t < 0.0:
        if t < -slack:
            raise ValueError(f"t = {t!r} outside [0, {horizon!r}]")
        t = 0.0
    elif t > horizon:
        if t > horizon + slack:
            raise ValueError(f"t = {t!r} outside [0, {horizon!r}]")
        t = horizon
    m = len(samples) - 1
    h = horizon / m
    j = int(t / h)
    if j > m - 1:
        j = m - 1
    u = (t - j * h) / h
    om = 1.0 - u
    hh6 = (h * h) / 6.0
    return (
        om * samples[j]
        + u * samples[j + 1]
        + ((om * om * om - om) * second_derivs[j]
           + (u * u * u - u) * second_derivs[j + 1]) * hh6
    )


def spline_values(horizon: float, samples: np.ndarray, second_derivs: np.ndarray,
                  ts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`spline_value` over an array of times (clamped to
    [0, horizon]); element-wise identical to the scalar version."""
    t = np.clip(np.asarray(ts, dtype=float), 0.0, horizon)
    m = len(samples) - 1
    h = horizon / m
    j = np.minimum((t / h).astype(int), m - 1)
    u = (t - j * h) / h
    om = 1.0 - u
    hh6 = (h * h) / 6.0
    return (
        om * samples[j]
        + u * samples[j + 1]
        + ((om * om * om - om) * second_derivs[j]
           + (u * u * u - u) * second_derivs[j + 1]) * hh6
    )
