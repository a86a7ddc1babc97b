"""Coil-core meminductor physics.

Scalar magnetization model for a single-domain core driven by the coil
current: the normalized magnetization m obeys

    dm/dt = i(t) * (1 - m^2) / sw_eff,

which integrates in closed form to m(q) = tanh(q/sw_eff + atanh(m0))
with q = integral of i.  The element's constitutive curves follow:

    flux:        phi(q) = flux_scale * (tanh(q/sw_eff + b) - m0),  b = atanh(m0)
    voltage:     v = dphi/dt = phi'(q) * i          (passive sign convention)
    rho(q):      time integral of phi along a constant-current drive i0,
                 rho = (flux_scale/i0) * [sw*(logcosh(q/sw + b) - logcosh(b)) - m0*q]
    L(q):        phi(q)/i0 = drho/dq.

All functions are pure; parameters are immutable value objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConfigError, DomainError
from .waveforms import Waveform

MAX_STEPS = 100_000_000


@dataclass(frozen=True)
class CoilCoreParams:
    """Physical constants of the coil-core element.

    flux_scale : magnetic flux scale (mu0 * area * saturation magnetization), Wb
    sw_eff     : effective switching coefficient, A*s (field-to-current
                 coil constant folded in; see README on units)
    m0         : initial normalized magnetization, strictly inside (-1, 1)
    """

    flux_scale: float
    sw_eff: float
    m0: float

    def __post_init__(self):
        for name in ("flux_scale", "sw_eff", "m0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise DomainError(f"{name} must be a finite number, got {v!r}")
        if self.flux_scale <= 0:
            raise DomainError(f"flux_scale must be > 0, got {self.flux_scale}")
        if self.sw_eff <= 0:
            raise DomainError(f"sw_eff must be > 0, got {self.sw_eff}")
        if not abs(self.m0) < 1.0:
            raise DomainError(f"m0 must satisfy |m0| < 1, got {self.m0}")

    @property
    def bias(self) -> float:
        """Integration constant atanh(m0); finite by construction."""
        return math.atanh(self.m0)


@dataclass(frozen=True)
class MagnetizationState:
    """Instantaneous (m, q) pair."""

    m: float
    q: float

    def __post_init__(self):
        if not -1.0 <= self.m <= 1.0:
            raise DomainError(f"|m| must not exceed 1, got {self.m}")


def _log_cosh(x):
    # log(cosh(x)), overflow-safe
    ax = np.abs(x)
    return ax - math.log(2.0) + np.log1p(np.exp(-2.0 * ax))


def _sech2(x):
    # sech(x)^2, overflow-safe
    a = np.exp(-2.0 * np.abs(x))
    return 4.0 * a / (1.0 + a) ** 2


def magnetization_rate(m: float, i: float, sw_eff: float) -> float:
    """dm/dt for magnetization m under drive current i; zero at |m| = 1."""
    if sw_eff <= 0 or not math.isfinite(sw_eff):
        raise DomainError(f"sw_eff must be a positive finite number, got {sw_eff}")
    if not (math.isfinite(m) and math.isfinite(i)):
        raise DomainError("m and i must be finite")
    return i * (1.0 - m * m) / sw_eff


def magnetization_closed_form(q, params: CoilCoreParams):
    """m(q) = tanh(q/sw_eff + atanh(m0)); strictly increasing, range (-1, 1)."""
    return np.tanh(np.asarray(q, dtype=float) / params.sw_eff + params.bias)


def integrate_magnetization(drive: Waveform, params: CoilCoreParams,
                            dt: float, t_stop: float):
    """Fixed-step RK4 of dm/dt with dq/dt = i(t); returns (t, m, q) arrays.

    The grid is uniform with step dt; t_stop is rounded to the nearest
    grid point (exact whenever t_stop is a multiple of dt).
    """
    if dt <= 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    if t_stop < dt:
        raise ConfigError(f"t_stop must be >= dt, got {t_stop}")
    n = int(round(t_stop / dt))
    if n > MAX_STEPS:
        raise ConfigError(f"{n} steps exceed the {MAX_STEPS} step guard")
    code, p, tp, vp = drive.encode()
    m, q = _kernels.mag_rk4(code, p, tp, vp, 1.0 / params.sw_eff,
                            params.m0, dt, n)
    t = np.arange(n + 1) * dt
    return t, m, q


def flux_of_charge(q, params: CoilCoreParams):
    """phi(q) anchored at phi(0) = 0; saturates at flux_scale*(±1 - m0)."""
    return params.flux_scale * (magnetization_closed_form(q, params) - params.m0)


def flux_slope(q, params: CoilCoreParams):
    """dphi/dq = (flux_scale/sw_eff) * sech^2(q/sw_eff + atanh m0)."""
    x = np.asarray(q, dtype=float) / params.sw_eff + params.bias
    return params.flux_scale / params.sw_eff * _sech2(x)


def element_voltage(q, i, params: CoilCoreParams):
    """Terminal drop v = dphi/dt = phi'(q) * i (passive sign convention)."""
    return flux_slope(q, params) * np.asarray(i, dtype=float)


def rho_and_L_constant_current(q, i0: float, params: CoilCoreParams):
    """(rho, L) along the constant-current trajectory q = i0*t, q >= 0.

    rho is the running time integral of phi with rho(0) = 0; L = phi/i0,
    which equals drho/dq.
    """
    if i0 <= 0 or not math.isfinite(i0):
        raise DomainError(f"i0 must be > 0, got {i0}")
    qa = np.asarray(q, dtype=float)
    if np.any(qa < 0):
        raise DomainError("constant-current trajectory requires q >= 0")
    s = params.sw_eff
    b = params.bias
    rho = params.flux_scale / i0 * (
        s * (_log_cosh(qa / s + b) - _log_cosh(b)) - params.m0 * qa)
    L = flux_of_charge(qa, params) / i0
    return rho, L


def rho_variant_nested_tanh(q, params: CoilCoreParams):
    """Comparison-only variant nesting tanh inside log-cosh.

    Not an antiderivative of phi and not used anywhere in the engine;
    retained so the two forms can be plotted against each other.
    """
    qa = np.asarray(q, dtype=float)
    return params.flux_scale * _log_cosh(
        np.tanh(qa / params.sw_eff + params.bias) - params.m0)
