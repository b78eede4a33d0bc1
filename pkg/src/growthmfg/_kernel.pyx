# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 trajectory kernel.

C mirror of ``_kernel_py.integrate_states``: same call signature, status
codes, and floating-point operation order (the build disables FMA
contraction), so the two backends produce the same trajectories.
"""

from libc.math cimport fabs, sqrt

cdef enum:
    STATUS_OK = 0
    STATUS_DIVERGED = 1
    STATUS_DOMAIN = 2

cdef double BLOWUP_LIMIT = 1e12
cdef double EPS_QA = 1e-3


cdef inline double _u1(double x) noexcept nogil:
    if x > 0.0:
        return sqrt(x + 0.0625)
    return 1.25 - (1.0 - x) * (1.0 - x)


cdef inline double _u1_prime(double x) noexcept nogil:
    if x > 0.0:
        return 0.5 / sqrt(x + 0.0625)
    return 2.0 * (1.0 - x)


cdef inline int _consumption(double q_a, int law_code, double* c, double* dc) noexcept nogil:
    """c*(q_a) and dc*/dq_a; returns a status (STATUS_DOMAIN for q_a <= 0
    in exact-Legendre mode)."""
    cdef double qe
    cdef bint floored
    if law_code == 0:  # paper-literal branch assignment
        if q_a > 2.0:
            c[0] = (4.0 - q_a * q_a) / (16.0 * q_a * q_a)
            dc[0] = -0.5 / (q_a * q_a * q_a)
        else:
            c[0] = 0.5 * (2.0 - q_a)
            dc[0] = -0.5
        return STATUS_OK
    if q_a <= 0.0:
        return STATUS_DOMAIN
    floored = q_a < EPS_QA
    qe = EPS_QA if floored else q_a
    if qe <= 2.0:
        c[0] = (4.0 - qe * qe) / (16.0 * qe * qe)
        dc[0] = 0.0 if floored else -0.5 / (qe * qe * qe)
    else:
        c[0] = 0.5 * (2.0 - qe)
        dc[0] = -0.5
    return STATUS_OK


cdef inline double _price(double t, double horizon, int m,
                          const double* samples, const double* m2) noexcept nogil:
    """Natural cubic spline evaluation; mirrors splines.spline_value."""
    cdef double h, u, om, hh6
    cdef int j
    if t > horizon:
        t = horizon
    elif t < 0.0:
        t = 0.0
    h = horizon / m
    j = <int>(t / h)
    if j > m - 1:
        j = m - 1
    u = (t - j * h) / h
    om = 1.0 - u
    hh6 = (h * h) / 6.0
    return (om * samples[j] + u * samples[j + 1]
            + ((om * om * om - om) * m2[j] + (u * u * u - u) * m2[j + 1]) * hh6)


cdef inline int _field(double t, double a, double k, double qa, double qk,
                       double horizon, int m, const double* samples, const double* m2,
                       double theta, double xi, double delta, int law_code,
                       double* out) noexcept nogil:
    """Signed Hamiltonian gradient (da/dt, dk/dt, dq_a/dt, dq_k/dt)."""
    cdef double p, c, dc, f, g, w, dh_da, dfdk, dh_dk, dh_dqa, dh_dqk
    cdef int status
    p = _price(t, horizon, m, samples, m2)
    status = _consumption(qa, law_code, &c, &dc)
    if status != STATUS_OK:
        return status
    f = theta * k + p * (xi * k)
    g = -(delta * k)
    w = qk - p * qa
    dh_da = _u1_prime(a)
    dfdk = theta + p * xi
    dh_dk = dfdk * qa - delta * qk + _u1_prime(k)
    dh_dqa = f - p * w - c + (_u1_prime(c) - qa) * dc
    dh_dqk = w + g
    out[0] = dh_dqa
    out[1] = dh_dqk
    out[2] = -dh_da
    out[3] = -dh_dk
    return STATUS_OK


def integrate_states(const double[::1] y0, double horizon, long n_steps,
                     const double[::1] price_samples, const double[::1] price_m2,
                     double theta, double xi, double delta, int law_code,
                     double[:, ::1] out_states, double[:, ::1] out_velocities):
    """See ``_kernel_py.integrate_states``; returns (status, step)."""
    cdef double dt = horizon / n_steps
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef int m = price_samples.shape[0] - 1
    cdef const double* samples = &price_samples[0]
    cdef const double* m2 = &price_m2[0]
    cdef double a = y0[0]
    cdef double k = y0[1]
    cdef double qa = y0[2]
    cdef double qk = y0[3]
    cdef double t
    cdef double f1[4]
    cdef double f2[4]
    cdef double f3[4]
    cdef double f4[4]
    cdef long j
    cdef int status = STATUS_OK
    cdef long bad_step = 0

    out_states[0, 0] = a
    out_states[0, 1] = k
    out_states[0, 2] = qa
    out_states[0, 3] = qk
    with nogil:
        for j in range(n_steps):
            t = j * dt
            status = _field(t, a, k, qa, qk, horizon, m, samples, m2,
                            theta, xi, delta, law_code, f1)
            if status != STATUS_OK:
                break
            out_velocities[j, 0] = f1[0]
            out_velocities[j, 1] = f1[1]
            out_velocities[j, 2] = f1[2]
            out_velocities[j, 3] = f1[3]
            status = _field(t + half, a + half * f1[0], k + half * f1[1],
                            qa + half * f1[2], qk + half * f1[3],
                            horizon, m, samples, m2, theta, xi, delta, law_code, f2)
            if status != STATUS_OK:
                break
            status = _field(t + half, a + half * f2[0], k + half * f2[1],
                            qa + half * f2[2], qk + half * f2[3],
                            horizon, m, samples, m2, theta, xi, delta, law_code, f3)
            if status != STATUS_OK:
                break
            status = _field(t + dt, a + dt * f3[0], k + dt * f3[1],
                            qa + dt * f3[2], qk + dt * f3[3],
                            horizon, m, samples, m2, theta, xi, delta, law_code, f4)
            if status != STATUS_OK:
                break
            a = a + sixth * (f1[0] + 2.0 * (f2[0] + f3[0]) + f4[0])
            k = k + sixth * (f1[1] + 2.0 * (f2[1] + f3[1]) + f4[1])
            qa = qa + sixth * (f1[2] + 2.0 * (f2[2] + f3[2]) + f4[2])
            qk = qk + sixth * (f1[3] + 2.0 * (f2[3] + f3[3]) + f4[3])
            if not (fabs(a) <= BLOWUP_LIMIT and fabs(k) <= BLOWUP_LIMIT
                    and fabs(qa) <= BLOWUP_LIMIT and fabs(qk) <= BLOWUP_LIMIT):
                status = STATUS_DIVERGED
                bad_step = j + 1
                break
            out_states[j + 1, 0] = a
            out_states[j + 1, 1] = k
            out_states[j + 1, 2] = qa
            out_states[j + 1, 3] = qk
        else:
            status = _field(horizon, a, k, qa, qk, horizon, m, samples, m2,
                            theta, xi, delta, law_code, f1)
            if status == STATUS_OK:
                out_velocities[n_steps, 0] = f1[0]
                out_velocities[n_steps, 1] = f1[1]
                out_velocities[n_steps, 2] = f1[2]
                out_velocities[n_steps, 3] = f1[3]

    if status == STATUS_DIVERGED:
        return STATUS_DIVERGED, bad_step
    if status != STATUS_OK:
        return status, 0
    return STATUS_OK, n_steps
