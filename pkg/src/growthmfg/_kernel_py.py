"""Pure-Python RK4 trajectory kernel.

Fallback for the compiled extension, selected at import time by
:mod:`growthmfg.kernel`.  The call signature, status codes, the order of
floating-point operations, and the blow-up/domain handling are kept
identical to ``_kernel.pyx`` so the two backends produce the same
trajectories.
"""

from __future__ import annotations

import numpy as np

from .economy import ConsumptionLaw, Economy
from .errors import ConsumptionDomainError
from .splines import spline_value

STATUS_OK = 0
STATUS_DIVERGED = 1
STATUS_DOMAIN = 2

BLOWUP_LIMIT = 1e12

_LAW_FROM_CODE = {0: ConsumptionLaw.PAPER_LITERAL, 1: ConsumptionLaw.LEGENDRE_EXACT}


def integrate_states(y0: np.ndarray, horizon: float, n_steps: int,
                     price_samples: np.ndarray, price_m2: np.ndarray,
                     theta: float, xi: float, delta: float, law_code: int,
                     out_states: np.ndarray, out_velocities: np.ndarray
                     ) -> tuple[int, int]:
    """Classical fixed-step RK4 on the four-dimensional Hamiltonian field.

    Fills ``out_states`` ((n_steps+1) x 4) and ``out_velocities`` (the field
    evaluated at every grid node).  Returns ``(status, step)``: status
    STATUS_OK, STATUS_DIVERGED (some component left [-BLOWUP_LIMIT,
    BLOWUP_LIMIT] after step ``step``) or STATUS_DOMAIN (consumption rule
    domain violation in LEGENDRE_EXACT mode).
    """
    econ = Economy(theta_coeff=theta, xi_coeff=xi, depreciation_rate=delta,
                   mode=_LAW_FROM_CODE[law_code])
    grad = econ.hamiltonian_grad
    dt = horizon / n_steps
    half = 0.5 * dt
    sixth = dt / 6.0

    def field(t, a, k, qa, qk):
        p = spline_value(horizon, price_samples, price_m2,
                         horizon if t > horizon else t)
        dh_da, dh_dk, dh_dqa, dh_dqk = grad(a, k, qa, qk, p)
        return dh_dqa, dh_dqk, -dh_da, -dh_dk

    a, k, qa, qk = (float(y0[0]), float(y0[1]), float(y0[2]), float(y0[3]))
    out_states[0, 0] = a
    out_states[0, 1] = k
    out_states[0, 2] = qa
    out_states[0, 3] = qk
    try:
        for j in range(n_steps):
            t = j * dt
            f10, f11, f12, f13 = field(t, a, k, qa, qk)
            out_velocities[j, 0] = f10
            out_velocities[j, 1] = f11
            out_velocities[j, 2] = f12
            out_velocities[j, 3] = f13
            f20, f21, f22, f23 = field(t + half, a + half * f10, k + half * f11,
                                       qa + half * f12, qk + half * f13)
            f30, f31, f32, f33 = field(t + half, a + half * f20, k + half * f21,
                                       qa + half * f22, qk + half * f23)
            f40, f41, f42, f43 = field(t + dt, a + dt * f30, k + dt * f31,
                                       qa + dt * f32, qk + dt * f33)
            a = a + sixth * (f10 + 2.0 * (f20 + f30) + f40)
            k = k + sixth * (f11 + 2.0 * (f21 + f31) + f41)
            qa = qa + sixth * (f12 + 2.0 * (f22 + f32) + f42)
            qk = qk + sixth * (f13 + 2.0 * (f23 + f33) + f43)
            if not (abs(a) <= BLOWUP_LIMIT and abs(k) <= BLOWUP_LIMIT
                    and abs(qa) <= BLOWUP_LIMIT and abs(qk) <= BLOWUP_LIMIT):
                return STATUS_DIVERGED, j + 1
            out_states[j + 1, 0] = a
            out_states[j + 1, 1] = k
            out_states[j + 1, 2] = qa
            out_states[j + 1, 3] = qk
        fe0, fe1, fe2, fe3 = field(horizon, a, k, qa, qk)
        out_velocities[n_steps, 0] = fe0
        out_velocities[n_steps, 1] = fe1
        out_velocities[n_steps, 2] = fe2
        out_velocities[n_steps, 3] = fe3
    except ConsumptionDomainError:
        return STATUS_DOMAIN, 0
    return STATUS_OK, n_steps
