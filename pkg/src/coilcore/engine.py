"""Transient engine for the compiled series loop, plus measurements.

Two ODE reductions cover the three inductive elements:

* linear / staircase inductor (inertial): states (q, i, v_c) with
  dq/dt = i, di/dt = (v_in - R i - v_c)/L(t), dv_c/dt = i/C; the
  staircase L is piecewise constant in time, stepping by a fixed factor
  at scheduled pulse-start times.
* coil-core element (no di/dt term): KVL gives
  i = (v_in - v_c)/(R + phi'(q)) with states (q, v_c); the denominator
  is guarded by a configurable floor.

Integration is fixed-step classical RK4 throughout (deterministic,
trivially convergence-testable).  Output is a uniformly sampled
:class:`~coilcore.trace.Trace`; v_out is the capacitor voltage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .device import flux_slope
from .errors import ConfigError, DomainError, SimulationError
from .netlist import (CoilCoreInductor, CompiledCircuit, LinearInductor,
                      StaircaseInductor)
from .trace import Trace

MAX_STEPS = 100_000_000


@dataclass(frozen=True)
class CircuitState:
    """Loop state snapshot; also used for initial conditions."""

    t: float = 0.0
    q: float = 0.0
    i: float = 0.0
    v_c: float = 0.0
    l_now: float | None = None


@dataclass(frozen=True)
class SecondOrderMetrics:
    f0: float
    alpha: float
    fd: float | None
    regime: str  # underdamped | critical | overdamped


def analyze_second_order(r: float, l: float, c: float) -> SecondOrderMetrics:
    """f0 = 1/(2*pi*sqrt(LC)), alpha = R/(2L), fd = sqrt(f0^2 - (alpha/2pi)^2)."""
    if l <= 0 or c <= 0:
        raise DomainError(f"need l > 0 and c > 0, got l={l}, c={c}")
    if r < 0:
        raise DomainError(f"need r >= 0, got {r}")
    f0 = 1.0 / (2.0 * math.pi * math.sqrt(l * c))
    alpha = r / (2.0 * l)
    w0 = 2.0 * math.pi * f0
    if alpha < w0:
        regime = "underdamped"
        fd = math.sqrt(f0 * f0 - (alpha / (2.0 * math.pi)) ** 2)
    elif alpha == w0:
        regime, fd = "critical", None
    else:
        regime, fd = "overdamped", None
    return SecondOrderMetrics(f0=f0, alpha=alpha, fd=fd, regime=regime)


@dataclass(frozen=True)
class OdeSystem:
    """Compiled right-hand side description consumed by the kernels."""

    circuit: CompiledCircuit
    first_order: bool
    initial: CircuitState = CircuitState()
    schedule: tuple = ()  # staircase update times, seconds
    stiffness_floor: float = 1e-9


def compile_circuit(circuit: CompiledCircuit, initial: CircuitState | None = None,
                    stiffness_floor: float = 1e-9) -> OdeSystem:
    """Reduce a validated circuit to an ODE descriptor.

    Staircase update times default to the source waveform's declared
    pulse-start times (deterministic; never edge-detected from signals).
    """
    initial = initial or CircuitState()
    ind = circuit.inductor
    if isinstance(ind, CoilCoreInductor):
        return OdeSystem(circuit, first_order=True, initial=initial,
                         stiffness_floor=stiffness_floor)
    if isinstance(ind, StaircaseInductor):
        schedule = tuple(circuit.source.pulse_starts())
        return OdeSystem(circuit, first_order=False, initial=initial,
                         schedule=schedule, stiffness_floor=stiffness_floor)
    if isinstance(ind, LinearInductor):
        return OdeSystem(circuit, first_order=False, initial=initial,
                         stiffness_floor=stiffness_floor)
    raise DomainError(f"unknown inductive element {ind!r}")


def simulate_transient(system: OdeSystem, tran=None, schedule=None) -> Trace:
    """Fixed-step RK4 transient run; returns the sampled Trace.

    tran overrides the circuit's (step, stop); schedule overrides the
    staircase update times.
    """
    circuit = system.circuit
    dt, t_stop = tran if tran is not None else (circuit.tran_step, circuit.tran_stop)
    if dt <= 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    if dt > t_stop / 10.0:
        raise ConfigError(f"dt must be <= t_stop/10, got dt={dt}, t_stop={t_stop}")
    n = int(round(t_stop / dt))
    if n > MAX_STEPS:
        raise ConfigError(f"{n} steps exceed the {MAX_STEPS} step guard")

    code, p, tp, vp = circuit.source.encode()
    t = np.arange(n + 1) * dt
    init = system.initial

    if system.first_order:
        params = circuit.inductor.params
        q, i, vc, status, bad = _kernels.coilcore_rk4(
            code, p, tp, vp, circuit.r, circuit.c, params.flux_scale,
            1.0 / params.sw_eff, params.bias, init.q, init.v_c, dt, n,
            system.stiffness_floor)
        _raise_on_status(status, bad, dt, system.stiffness_floor)
        columns = {"time": t, "v_in": circuit.source.sample(t), "i": i,
                   "v_out": vc, "q": q}
        return Trace(dt=dt, columns=columns)

    ind = circuit.inductor
    if isinstance(ind, StaircaseInductor):
        l0, factor = ind.l0, 1.0 - ind.delta
        times = system.schedule if schedule is None else tuple(schedule)
    else:
        l0, factor = ind.l, 1.0
        times = ()
    upd = np.array(sorted(int(round(s / dt)) for s in times if s <= t_stop),
                   dtype=np.int64)
    q, i, vc, leff, status, bad = _kernels.rlc_rk4(
        code, p, tp, vp, circuit.r, circuit.c, l0, factor, upd,
        init.q, init.i, init.v_c, dt, n)
    _raise_on_status(status, bad, dt, system.stiffness_floor)
    columns = {"time": t, "v_in": circuit.source.sample(t), "i": i,
               "v_out": vc, "q": q, "l_eff": leff}
    return Trace(dt=dt, columns=columns)


def _raise_on_status(status, bad, dt, floor):
    if status == 1:
        raise SimulationError(
            f"loop stiffness: R + phi'(q) fell below the floor {floor:g} at "
            f"t = {bad * dt:g} s; increase the series resistance",
            "stiffness", time=bad * dt)
    if status == 2:
        raise SimulationError(
            f"non-finite state at t = {bad * dt:g} s (reduce dt)",
            "divergence", time=bad * dt)


# ------------------------------------------------------------ measurements

def local_extrema(t, y):
    """(times, values) of interior local extrema, parabolically refined."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    d1 = y[1:-1] - y[:-2]
    d2 = y[2:] - y[1:-1]
    idx = np.where(d1 * d2 < 0)[0] + 1
    if idx.size == 0:
        return np.empty(0), np.empty(0)
    dt = t[1] - t[0]
    ym, y0, yp = y[idx - 1], y[idx], y[idx + 1]
    denom = ym - 2.0 * y0 + yp
    off = np.where(denom != 0, 0.5 * (ym - yp) / np.where(denom != 0, denom, 1.0), 0.0)
    t_ref = t[idx] + off * dt
    y_ref = y0 - 0.25 * (ym - yp) * off
    return t_ref, y_ref


def zero_crossings(t, y):
    """Linearly interpolated zero-crossing times of a sampled signal."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    s = np.signbit(y)
    idx = np.where((s[:-1] != s[1:]) & (y[:-1] != 0.0))[0]
    frac = y[idx] / (y[idx] - y[idx + 1])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def measure_ringdown(trace: Trace, signal: str):
    """(frequency, alpha) of a decaying oscillation around zero.

    Frequency from the mean zero-crossing spacing; alpha from a
    least-squares line through log|peak| versus peak time.
    """
    y = trace.signal(signal)
    t = trace.time
    crossings = zero_crossings(t, y)
    if crossings.size < 4:
        raise SimulationError(
            f"need at least 4 zero crossings, found {crossings.size}",
            "insufficient-data")
    f = 1.0 / (2.0 * float(np.mean(np.diff(crossings))))
    pt, pv = local_extrema(t, y)
    keep = np.abs(pv) > 0
    pt, pv = pt[keep], pv[keep]
    if pt.size < 2:
        raise SimulationError(
            f"need at least 2 peaks for the decay fit, found {pt.size}",
            "insufficient-data")
    coeffs = np.polyfit(pt, np.log(np.abs(pv)), 1)
    alpha = -float(coeffs[0])
    return f, alpha


def envelope(trace: Trace, signal: str):
    """(times, |amplitude|) of the signal's local extrema."""
    pt, pv = local_extrema(trace.time, trace.signal(signal))
    return pt, np.abs(pv)


def coilcore_flux_slope(circuit: CompiledCircuit, q):
    """phi'(q) of the circuit's coil-core element (helper for reporting)."""
    if not isinstance(circuit.inductor, CoilCoreInductor):
        raise DomainError("circuit has no coil-core element")
    return flux_slope(q, circuit.inductor.params)
