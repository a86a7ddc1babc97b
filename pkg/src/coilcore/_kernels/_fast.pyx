# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels; contracts identical to _pyref."""

from libc.math cimport sin, exp, floor, fabs, isfinite, M_PI

import numpy as np

NAME = "fast"

DEF CONST = 0
DEF SINE = 1
DEF PULSE = 2
DEF STEP = 3
DEF PWL = 4


cdef inline double _wf(int code, double[::1] p, double[::1] tp, double[::1] vp,
                       double t) noexcept nogil:
    cdef double k, f
    cdef Py_ssize_t lo, hi, mid, n
    if code == CONST:
        return p[0]
    if code == SINE:
        return p[0] + p[1] * sin(2.0 * M_PI * p[2] * t)
    if code == PULSE:
        if t < p[2]:
            return p[0]
        k = floor((t - p[2]) / p[4])
        if k >= p[5]:
            return p[0]
        return p[1] if (t - p[2] - k * p[4]) < p[3] else p[0]
    if code == STEP:
        return p[1] if t >= p[2] else p[0]
    n = tp.shape[0]
    if t <= tp[0]:
        return vp[0]
    if t >= tp[n - 1]:
        return vp[n - 1]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if tp[mid] <= t:
            lo = mid
        else:
            hi = mid
    f = (t - tp[lo]) / (tp[lo + 1] - tp[lo])
    return vp[lo] + f * (vp[lo + 1] - vp[lo])


cdef inline double _sech2(double x) noexcept nogil:
    cdef double a = exp(-2.0 * fabs(x))
    return 4.0 * a / ((1.0 + a) * (1.0 + a))


def wf_value(int code, double[::1] p, double[::1] tp, double[::1] vp, double t):
    return _wf(code, p, tp, vp, t)


def mag_rk4(int code, double[::1] p, double[::1] tp, double[::1] vp,
            double inv_sw, double m0, double dt, Py_ssize_t n):
    m_arr = np.empty(n + 1)
    q_arr = np.empty(n + 1)
    cdef double[::1] m_out = m_arr
    cdef double[::1] q_out = q_arr
    cdef double m = m0, q = 0.0
    cdef double t, i1, i2, i4, k1, k2, k3, k4, m2, m3, m4
    cdef Py_ssize_t k
    m_out[0] = m
    q_out[0] = q
    with nogil:
        for k in range(n):
            t = k * dt
            i1 = _wf(code, p, tp, vp, t)
            i2 = _wf(code, p, tp, vp, t + 0.5 * dt)
            i4 = _wf(code, p, tp, vp, t + dt)
            k1 = inv_sw * i1 * (1.0 - m * m)
            m2 = m + 0.5 * dt * k1
            k2 = inv_sw * i2 * (1.0 - m2 * m2)
            m3 = m + 0.5 * dt * k2
            k3 = inv_sw * i2 * (1.0 - m3 * m3)
            m4 = m + dt * k3
            k4 = inv_sw * i4 * (1.0 - m4 * m4)
            m += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            q += dt * (i1 + 4.0 * i2 + i4) / 6.0
            m_out[k + 1] = m
            q_out[k + 1] = q
    return m_arr, q_arr


def rlc_rk4(int code, double[::1] p, double[::1] tp, double[::1] vp,
            double r, double c, double l0, double lfactor,
            long long[::1] upd, double q0, double i0, double vc0,
            double dt, Py_ssize_t n):
    q_arr = np.empty(n + 1)
    i_arr = np.empty(n + 1)
    vc_arr = np.empty(n + 1)
    l_arr = np.empty(n + 1)
    cdef double[::1] q_out = q_arr
    cdef double[::1] i_out = i_arr
    cdef double[::1] vc_out = vc_arr
    cdef double[::1] l_out = l_arr
    cdef double q = q0, i = i0, vc = vc0
    cdef double L, t, v1, v2, v4
    cdef double aq1, ai1, av1, aq2, ai2, av2, aq3, ai3, av3, aq4, ai4, av4
    cdef double ib, vb
    cdef Py_ssize_t k, stage = 0, st, n_upd = upd.shape[0]
    cdef int status = 0
    cdef Py_ssize_t bad = 0
    q_out[0] = q
    i_out[0] = i
    vc_out[0] = vc
    while stage < n_upd and 0 >= upd[stage]:
        stage += 1
    l_out[0] = l0 * lfactor ** stage
    with nogil:
        for k in range(n):
            while stage < n_upd and k >= upd[stage]:
                stage += 1
            L = l0 * lfactor ** stage
            t = k * dt
            v1 = _wf(code, p, tp, vp, t)
            v2 = _wf(code, p, tp, vp, t + 0.5 * dt)
            v4 = _wf(code, p, tp, vp, t + dt)

            aq1 = i
            ai1 = (v1 - r * i - vc) / L
            av1 = i / c

            ib = i + 0.5 * dt * ai1
            vb = vc + 0.5 * dt * av1
            aq2 = ib
            ai2 = (v2 - r * ib - vb) / L
            av2 = ib / c

            ib = i + 0.5 * dt * ai2
            vb = vc + 0.5 * dt * av2
            aq3 = ib
            ai3 = (v2 - r * ib - vb) / L
            av3 = ib / c

            ib = i + dt * ai3
            vb = vc + dt * av3
            aq4 = ib
            ai4 = (v4 - r * ib - vb) / L
            av4 = ib / c

            q += dt * (aq1 + 2.0 * aq2 + 2.0 * aq3 + aq4) / 6.0
            i += dt * (ai1 + 2.0 * ai2 + 2.0 * ai3 + ai4) / 6.0
            vc += dt * (av1 + 2.0 * av2 + 2.0 * av3 + av4) / 6.0
            if not (isfinite(q) and isfinite(i) and isfinite(vc)):
                status = 2
                bad = k + 1
                break
            q_out[k + 1] = q
            i_out[k + 1] = i
            vc_out[k + 1] = vc
            st = stage
            while st < n_upd and k + 1 >= upd[st]:
                st += 1
            l_out[k + 1] = l0 * lfactor ** st
    return q_arr, i_arr, vc_arr, l_arr, status, bad


def coilcore_rk4(int code, double[::1] p, double[::1] tp, double[::1] vp,
                 double r, double c, double flux_scale, double inv_sw,
                 double bias, double q0, double vc0, double dt,
                 Py_ssize_t n, double eps):
    q_arr = np.empty(n + 1)
    i_arr = np.empty(n + 1)
    vc_arr = np.empty(n + 1)
    cdef double[::1] q_out = q_arr
    cdef double[::1] i_out = i_arr
    cdef double[::1] vc_out = vc_arr
    cdef double q = q0, vc = vc0
    cdef double g = flux_scale * inv_sw
    cdef double t, den, i1, i2, i3, i4, di
    cdef Py_ssize_t k
    cdef int status = 0
    cdef Py_ssize_t bad = 0

    den = r + g * _sech2(q * inv_sw + bias)
    if den < eps:
        return q_arr, i_arr, vc_arr, 1, 0
    q_out[0] = q
    i_out[0] = (_wf(code, p, tp, vp, 0.0) - vc) / den
    vc_out[0] = vc
    with nogil:
        for k in range(n):
            t = k * dt
            den = r + g * _sech2(q * inv_sw + bias)
            if den < eps:
                status = 1
                bad = k
                break
            i1 = (_wf(code, p, tp, vp, t) - vc) / den
            den = r + g * _sech2((q + 0.5 * dt * i1) * inv_sw + bias)
            if den < eps:
                status = 1
                bad = k
                break
            i2 = (_wf(code, p, tp, vp, t + 0.5 * dt) - (vc + 0.5 * dt * i1 / c)) / den
            den = r + g * _sech2((q + 0.5 * dt * i2) * inv_sw + bias)
            if den < eps:
                status = 1
                bad = k
                break
            i3 = (_wf(code, p, tp, vp, t + 0.5 * dt) - (vc + 0.5 * dt * i2 / c)) / den
            den = r + g * _sech2((q + dt * i3) * inv_sw + bias)
            if den < eps:
                status = 1
                bad = k
                break
            i4 = (_wf(code, p, tp, vp, t + dt) - (vc + dt * i3 / c)) / den
            di = (i1 + 2.0 * i2 + 2.0 * i3 + i4) / 6.0
            q += dt * di
            vc += dt * di / c
            if not (isfinite(q) and isfinite(vc)):
                status = 2
                bad = k + 1
                break
            den = r + g * _sech2(q * inv_sw + bias)
            if den < eps:
                status = 1
                bad = k + 1
                break
            q_out[k + 1] = q
            i_out[k + 1] = (_wf(code, p, tp, vp, (k + 1) * dt) - vc) / den
            vc_out[k + 1] = vc
    return q_arr, i_arr, vc_arr, status, bad
