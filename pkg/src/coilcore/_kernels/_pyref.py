"""Pure-Python reference kernels.

Same contracts as the compiled module ``_fast``; selected automatically
when the extension is unavailable (or COILCORE_BACKEND=python).  These
are plain sequential RK4 loops: correctness reference first, speed second.
"""

import math

import numpy as np

NAME = "python"

# waveform codes (mirror waveforms.py)
_CONST, _SINE, _PULSE, _STEP, _PWL = 0, 1, 2, 3, 4

_TWO_PI = 2.0 * math.pi


def wf_value(code, p, tp, vp, t):
    if code == _CONST:
        return p[0]
    if code == _SINE:
        return p[0] + p[1] * math.sin(_TWO_PI * p[2] * t)
    if code == _PULSE:
        if t < p[2]:
            return p[0]
        k = math.floor((t - p[2]) / p[4])
        if k >= p[5]:
            return p[0]
        return p[1] if (t - p[2] - k * p[4]) < p[3] else p[0]
    if code == _STEP:
        return p[1] if t >= p[2] else p[0]
    # PWL, clamped
    n = len(tp)
    if t <= tp[0]:
        return vp[0]
    if t >= tp[n - 1]:
        return vp[n - 1]
    lo, hi = 0, n - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tp[mid] <= t:
            lo = mid
        else:
            hi = mid
    f = (t - tp[lo]) / (tp[lo + 1] - tp[lo])
    return vp[lo] + f * (vp[lo + 1] - vp[lo])


def _sech2(x):
    # overflow-safe sech^2
    a = math.exp(-2.0 * abs(x))
    return 4.0 * a / ((1.0 + a) * (1.0 + a))


def mag_rk4(code, p, tp, vp, inv_sw, m0, dt, n):
    """Integrate dm/dt = inv_sw*i(t)*(1-m^2), dq/dt = i(t) from (m0, 0)."""
    m_out = np.empty(n + 1)
    q_out = np.empty(n + 1)
    m = m0
    q = 0.0
    m_out[0] = m
    q_out[0] = q
    for k in range(n):
        t = k * dt
        i1 = wf_value(code, p, tp, vp, t)
        i2 = wf_value(code, p, tp, vp, t + 0.5 * dt)
        i4 = wf_value(code, p, tp, vp, t + dt)
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
    return m_out, q_out


def rlc_rk4(code, p, tp, vp, r, c, l0, lfactor, upd, q0, i0, vc0, dt, n):
    """Series V-R-L-C loop with piecewise-constant L.

    States (q, i, vc): dq/dt = i, di/dt = (v_in - r*i - vc)/L, dvc/dt = i/c.
    L = l0*lfactor**stage, the stage advancing at step indices in ``upd``.
    Returns (q, i, vc, l_eff, status, bad_step); status 2 = non-finite state.
    """
    q_out = np.empty(n + 1)
    i_out = np.empty(n + 1)
    vc_out = np.empty(n + 1)
    l_out = np.empty(n + 1)
    q, i, vc = q0, i0, vc0
    q_out[0] = q
    i_out[0] = i
    vc_out[0] = vc
    stage = 0
    n_upd = len(upd)
    while stage < n_upd and 0 >= upd[stage]:
        stage += 1
    l_out[0] = l0 * lfactor ** stage
    # match the compiled kernel: let inf/nan propagate into the
    # divergence check instead of tripping numpy overflow warnings
    with np.errstate(all="ignore"):
        for k in range(n):
            while stage < n_upd and k >= upd[stage]:
                stage += 1
            L = l0 * lfactor ** stage
            t = k * dt
            v1 = wf_value(code, p, tp, vp, t)
            v2 = wf_value(code, p, tp, vp, t + 0.5 * dt)
            v4 = wf_value(code, p, tp, vp, t + dt)

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
            if not (math.isfinite(q) and math.isfinite(i) and math.isfinite(vc)):
                return q_out, i_out, vc_out, l_out, 2, k + 1
            q_out[k + 1] = q
            i_out[k + 1] = i
            vc_out[k + 1] = vc
            st = stage
            while st < n_upd and k + 1 >= upd[st]:
                st += 1
            l_out[k + 1] = l0 * lfactor ** st
    return q_out, i_out, vc_out, l_out, 0, 0


def coilcore_rk4(code, p, tp, vp, r, c, flux_scale, inv_sw, bias,
                 q0, vc0, dt, n, eps):
    """First-order loop with the coil-core element.

    i = (v_in - vc)/(r + dphi(q)), dq/dt = i, dvc/dt = i/c, where
    dphi(q) = flux_scale*inv_sw*sech^2(q*inv_sw + bias).
    Returns (q, i, vc, status, bad_step); status 1 = denominator below eps,
    status 2 = non-finite state.
    """
    q_out = np.empty(n + 1)
    i_out = np.empty(n + 1)
    vc_out = np.empty(n + 1)
    q, vc = q0, vc0
    g = flux_scale * inv_sw

    def cur(t, qq, vv):
        den = r + g * _sech2(qq * inv_sw + bias)
        if den < eps:
            return None
        return (wf_value(code, p, tp, vp, t) - vv) / den

    i_now = cur(0.0, q, vc)
    if i_now is None:
        return q_out, i_out, vc_out, 1, 0
    q_out[0] = q
    i_out[0] = i_now
    vc_out[0] = vc
    for k in range(n):
        t = k * dt
        i1 = cur(t, q, vc)
        if i1 is None:
            return q_out, i_out, vc_out, 1, k
        i2 = cur(t + 0.5 * dt, q + 0.5 * dt * i1, vc + 0.5 * dt * i1 / c)
        if i2 is None:
            return q_out, i_out, vc_out, 1, k
        i3 = cur(t + 0.5 * dt, q + 0.5 * dt * i2, vc + 0.5 * dt * i2 / c)
        if i3 is None:
            return q_out, i_out, vc_out, 1, k
        i4 = cur(t + dt, q + dt * i3, vc + dt * i3 / c)
        if i4 is None:
            return q_out, i_out, vc_out, 1, k
        di = (i1 + 2.0 * i2 + 2.0 * i3 + i4) / 6.0
        q += dt * di
        vc += dt * di / c
        if not (math.isfinite(q) and math.isfinite(vc)):
            return q_out, i_out, vc_out, 2, k + 1
        i_now = cur((k + 1) * dt, q, vc)
        if i_now is None:
            return q_out, i_out, vc_out, 1, k + 1
        q_out[k + 1] = q
        i_out[k + 1] = i_now
        vc_out[k + 1] = vc
    return q_out, i_out, vc_out, 0, 0
