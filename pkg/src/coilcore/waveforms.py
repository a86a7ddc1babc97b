"""Declarative source/stimulus waveforms.

A :class:`Waveform` is an immutable description of a drive signal
(current or voltage): constant, sine, finite pulse train, step, or
piecewise-linear.  Evaluation is available both here (:meth:`Waveform.value`)
and inside the integration kernels, which receive the packed
``(code, params, times, values)`` encoding from :meth:`Waveform.encode`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# kernel encoding codes
CODE_CONST = 0
CODE_SINE = 1
CODE_PULSE = 2
CODE_STEP = 3
CODE_PWL = 4

_KINDS = {"const": CODE_CONST, "sine": CODE_SINE, "pulse": CODE_PULSE,
          "step": CODE_STEP, "pwl": CODE_PWL}


@dataclass(frozen=True)
class Waveform:
    kind: str
    params: tuple = ()
    times: tuple = ()
    values: tuple = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown waveform kind {self.kind!r}")
        if any(not math.isfinite(p) for p in self.params):
            raise DomainError("waveform parameters must be finite")

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: float) -> "Waveform":
        return cls("const", (float(value),))

    @classmethod
    def sine(cls, offset: float, amplitude: float, frequency: float) -> "Waveform":
        """offset + amplitude*sin(2*pi*frequency*t)"""
        if frequency <= 0:
            raise DomainError("sine frequency must be > 0")
        return cls("sine", (float(offset), float(amplitude), float(frequency)))

    @classmethod
    def pulse(cls, v0: float, v1: float, delay: float, width: float,
              period: float, count: int) -> "Waveform":
        """Train of ``count`` rectangular pulses of the given width/period."""
        if width <= 0 or period <= 0 or width > period:
            raise DomainError("pulse needs 0 < width <= period")
        if delay < 0 or count < 1:
            raise DomainError("pulse needs delay >= 0 and count >= 1")
        return cls("pulse", (float(v0), float(v1), float(delay), float(width),
                             float(period), float(count)))

    @classmethod
    def step(cls, v0: float, v1: float, t_step: float) -> "Waveform":
        """v0 for t < t_step, v1 from t_step on."""
        return cls("step", (float(v0), float(v1), float(t_step)))

    @classmethod
    def pwl(cls, times, values) -> "Waveform":
        """Piecewise-linear through (t, v) points; clamped outside the span."""
        t = tuple(float(x) for x in times)
        v = tuple(float(x) for x in values)
        if len(t) != len(v) or len(t) < 2:
            raise DomainError("pwl needs >= 2 matching (t, v) points")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise DomainError("pwl times must be strictly increasing")
        return cls("pwl", (), t, v)

    # -- evaluation ---------------------------------------------------

    def value(self, t: float) -> float:
        p = self.params
        if self.kind == "const":
            return p[0]
        if self.kind == "sine":
            return p[0] + p[1] * math.sin(2.0 * math.pi * p[2] * t)
        if self.kind == "pulse":
            v0, v1, delay, width, period, count = p
            if t < delay:
                return v0
            k = math.floor((t - delay) / period)
            if k >= count:
                return v0
            return v1 if (t - delay - k * period) < width else v0
        if self.kind == "step":
            return p[1] if t >= p[2] else p[0]
        # pwl
        return float(np.interp(t, self.times, self.values))

    def __call__(self, t):
        return self.value(t)

    def sample(self, t) -> np.ndarray:
        """Vectorized evaluation over an array of times."""
        t = np.asarray(t, dtype=float)
        p = self.params
        if self.kind == "const":
            return np.full(t.shape, p[0])
        if self.kind == "sine":
            return p[0] + p[1] * np.sin(2.0 * np.pi * p[2] * t)
        if self.kind == "pulse":
            v0, v1, delay, width, period, count = p
            rel = t - delay
            k = np.floor(rel / period)
            on = (rel >= 0) & (k < count) & (rel - k * period < width)
            return np.where(on, v1, v0)
        if self.kind == "step":
            return np.where(t >= p[2], p[1], p[0])
        return np.interp(t, self.times, self.values)

    # -- structure ----------------------------------------------------

    @property
    def period(self):
        """Fundamental period, or None for aperiodic waveforms."""
        if self.kind == "sine":
            return 1.0 / self.params[2]
        if self.kind == "const":
            return None  # any period; treated as aperiodic-but-safe
        return None

    def pulse_starts(self) -> list:
        """Declared pulse-start times (empty for non-pulse waveforms)."""
        if self.kind != "pulse":
            return []
        v0, v1, delay, width, period, count = self.params
        return [delay + k * period for k in range(int(count))]

    def encode(self):
        """Packed (code, params, times, values) for the kernels."""
        return (_KINDS[self.kind],
                np.asarray(self.params, dtype=np.float64),
                np.asarray(self.times, dtype=np.float64),
                np.asarray(self.values, dtype=np.float64))
