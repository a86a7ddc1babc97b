"""Resonance-learning (SPS) experiment orchestration.

Protocol: a train of ``n_train`` voltage pulses at the stimulus frequency
drives a series loop whose staircase inductance drops by a fixed fraction
at each pulse start; the capacitance is chosen so the post-training
resonance equals the stimulus frequency.  After the train the loop keeps
ringing at the learned period, so output peaks recur inside windows around
the anticipated continuation times: the memorizing / timing / anticipating
signatures.

Expected probe times are anchored to the detected response peak of the
last stimulus period (the ring-down continues that peak's rhythm exactly;
the raw pulse-start times, also recorded in the stimulus metadata, lead
the response by a quarter period plus half the pulse width).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .engine import (analyze_second_order, compile_circuit, local_extrema,
                     simulate_transient)
from .errors import ConfigError, SimulationError
from .netlist import CompiledCircuit, StaircaseInductor
from .trace import Trace
from .waveforms import Waveform


@dataclass
class SpsConfig:
    """Stimulus/circuit description for one SPS run.

    capacitance defaults to the closed-form choice that puts the
    post-training resonance at f_sti; dt defaults to one thousandth of a
    stimulus period (pulse edges then fall on grid points).
    """

    f_sti: float = 100.0
    n_train: int = 3
    n_probe: int = 3
    pulse_width: float | None = None
    amplitude: float = 1.0
    r: float = 10.0
    l0: float = 2.0
    delta: float = 0.2
    capacitance: float | None = None
    dt: float | None = None
    window: float = 0.05
    noise_floor_frac: float = 0.01

    def __post_init__(self):
        if self.f_sti <= 0:
            raise ConfigError(f"f_sti must be > 0, got {self.f_sti}")
        if self.n_train < 1:
            raise ConfigError(f"n_train must be >= 1, got {self.n_train}")
        if self.n_probe < 1:
            raise ConfigError(f"n_probe must be >= 1, got {self.n_probe}")
        if self.pulse_width is None:
            self.pulse_width = 0.1 / self.f_sti
        if not 0 < self.pulse_width < 1.0 / self.f_sti:
            raise ConfigError("pulse_width must lie in (0, 1/f_sti)")
        if self.l0 <= 0 or not 0 <= self.delta < 1 or self.r < 0:
            raise ConfigError("need l0 > 0, 0 <= delta < 1 and r >= 0")
        if self.capacitance is None:
            self.capacitance = self.target_capacitance(
                self.f_sti, self.l0, self.delta, self.n_train)
        if self.dt is None:
            self.dt = 1.0 / self.f_sti / 1000.0
        if not 0 < self.window < 0.5:
            raise ConfigError(f"window must lie in (0, 0.5), got {self.window}")

    @staticmethod
    def target_capacitance(f_sti, l0, delta, n_train):
        """C with 1/(2*pi*sqrt(L_final*C)) = f_sti after n_train updates."""
        l_final = l0 * (1.0 - delta) ** n_train
        return 1.0 / ((2.0 * math.pi * f_sti) ** 2 * l_final)

    @property
    def period(self) -> float:
        return 1.0 / self.f_sti

    @property
    def t_stop(self) -> float:
        return (self.n_train + self.n_probe + 1) * self.period

    def to_circuit(self) -> CompiledCircuit:
        return CompiledCircuit(
            source=build_sps_stimulus(self), r=self.r,
            inductor=StaircaseInductor(self.l0, self.delta),
            c=self.capacitance, tran_step=self.dt, tran_stop=self.t_stop)


@dataclass(frozen=True)
class Event:
    """One detected output extremum."""

    time: float
    amplitude: float
    expected_time: float | None = None

    def to_dict(self):
        return {"time": self.time, "amplitude": self.amplitude,
                "expected_time": self.expected_time}


@dataclass
class SpsReport:
    l_sequence: list
    f0_sequence: list
    s_events: list
    c_events: list
    anticipation_detected: bool
    timing_errors: list
    noise_floor: float
    trace: Trace | None = field(default=None, repr=False)

    def to_json_dict(self):
        return {
            "l_sequence": self.l_sequence,
            "f0_sequence": self.f0_sequence,
            "s_events": [e.to_dict() for e in self.s_events],
            "c_events": [e.to_dict() for e in self.c_events],
            "anticipation_detected": self.anticipation_detected,
            "timing_errors": self.timing_errors,
            "noise_floor": self.noise_floor,
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def build_sps_stimulus(cfg: SpsConfig) -> Waveform:
    """Pulse train starting one period in, with protocol times in metadata."""
    T = cfg.period
    wf = Waveform.pulse(0.0, cfg.amplitude, T, cfg.pulse_width, T, cfg.n_train)
    t_s_last = cfg.n_train * T
    meta = {
        "pulse_starts": [T * (k + 1) for k in range(cfg.n_train)],
        "expected_probe_times": [t_s_last + (k + 1) * T for k in range(cfg.n_probe)],
        "period": T,
        "t_stop": cfg.t_stop,
    }
    return Waveform(wf.kind, wf.params, wf.times, wf.values, metadata=meta)


def _largest_extremum(trace, lo, hi):
    t, v = local_extrema(trace.time, trace.signal("v_out"))
    keep = (t >= lo) & (t <= hi)
    t, v = t[keep], v[keep]
    if t.size == 0:
        return None
    k = int(np.argmax(np.abs(v)))
    return float(t[k]), float(abs(v[k]))


def detect_responses(trace: Trace, expected_times, window: float, floor: float):
    """Largest |v_out| extremum in [t*(1-window), t*(1+window)] per target.

    Events below the floor (or windows without an extremum) are omitted.
    """
    if not 0 < window < 0.5:
        raise ConfigError(f"window must lie in (0, 0.5), got {window}")
    t_lo, t_hi = float(trace.time[0]), float(trace.time[-1])
    events = []
    for te in expected_times:
        if not t_lo <= te <= t_hi:
            raise SimulationError(
                f"expected time {te:g} s outside the trace span "
                f"[{t_lo:g}, {t_hi:g}] s", "range")
        found = _largest_extremum(trace, te * (1.0 - window), te * (1.0 + window))
        if found is not None and found[1] >= floor:
            events.append(Event(time=found[0], amplitude=found[1],
                                expected_time=float(te)))
    return events


def run_sps(cfg: SpsConfig) -> SpsReport:
    """Run the full protocol and extract the learning signatures.

    anticipation_detected is true when every probe window (anchored to the
    last training response, half-width ``window`` of a period) contains an
    extremum above the noise floor; window containment bounds the timing
    error by construction.
    """
    circuit = cfg.to_circuit()
    trace = simulate_transient(compile_circuit(circuit))
    T = cfg.period

    l_sequence = [cfg.l0 * (1.0 - cfg.delta) ** k for k in range(cfg.n_train + 1)]
    f0_sequence = [analyze_second_order(cfg.r, l, cfg.capacitance).f0
                   for l in l_sequence]

    s_events = []
    for k in range(1, cfg.n_train + 1):
        found = _largest_extremum(trace, k * T, (k + 1) * T)
        if found is None:
            raise SimulationError(
                f"no output extremum in stimulus period {k}", "insufficient-data")
        s_events.append(Event(time=found[0], amplitude=found[1],
                              expected_time=k * T))

    floor = cfg.noise_floor_frac * max(e.amplitude for e in s_events)
    anchor = s_events[-1].time
    c_events = []
    timing_errors = []
    for k in range(1, cfg.n_probe + 1):
        te = anchor + k * T
        found = _largest_extremum(trace, te - cfg.window * T, te + cfg.window * T)
        if found is not None and found[1] >= floor:
            c_events.append(Event(time=found[0], amplitude=found[1],
                                  expected_time=te))
            timing_errors.append(abs(found[0] - te))

    return SpsReport(
        l_sequence=l_sequence, f0_sequence=f0_sequence, s_events=s_events,
        c_events=c_events,
        anticipation_detected=len(c_events) == cfg.n_probe,
        timing_errors=timing_errors, noise_floor=floor, trace=trace)
