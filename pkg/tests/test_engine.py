"""Transient engine: analytics, RK4 fidelity, staircase, coil-core, measurements."""

import math

import numpy as np
import pytest

from coilcore import (CircuitState, CoilCoreParams, CompiledCircuit,
                      ConfigError, DomainError, LinearInductor,
                      SimulationError, StaircaseInductor, Trace, Waveform,
                      analyze_second_order, compile_circuit, envelope,
                      measure_ringdown, simulate_transient)
from coilcore.netlist import CoilCoreInductor


def step_response(t, v0, r, l, c):
    """Analytic underdamped series-RLC step response (zero ICs)."""
    alpha = r / (2 * l)
    w0 = 1.0 / math.sqrt(l * c)
    wd = math.sqrt(w0 * w0 - alpha * alpha)
    e = np.exp(-alpha * t)
    vc = v0 * (1 - e * (np.cos(wd * t) + (alpha / wd) * np.sin(wd * t)))
    i = v0 / (wd * l) * e * np.sin(wd * t)
    return vc, i


def make_circuit(source, r, inductor, c, dt, t_stop):
    return CompiledCircuit(source=source, r=r, inductor=inductor, c=c,
                           tran_step=dt, tran_stop=t_stop)


class TestSecondOrder:
    def test_starting_inductance_point(self):
        m = analyze_second_order(0.0, 2.0, 1e-6)
        assert m.f0 == pytest.approx(112.54, abs=0.01)
        assert m.alpha == 0.0
        assert m.fd == pytest.approx(m.f0)
        assert m.regime == "underdamped"

    def test_alpha_arithmetic(self):
        assert analyze_second_order(1.0, 2.0, 1e-3).alpha == pytest.approx(0.25)

    def test_regimes(self):
        assert analyze_second_order(2.0, 1.0, 1.0).regime == "critical"
        assert analyze_second_order(3.0, 1.0, 1.0).regime == "overdamped"
        assert analyze_second_order(3.0, 1.0, 1.0).fd is None

    def test_fd_below_f0(self):
        m = analyze_second_order(50.0, 0.5, 1e-5)
        assert m.fd < m.f0
        assert m.fd == pytest.approx(
            math.sqrt(m.f0 ** 2 - (m.alpha / (2 * math.pi)) ** 2))

    def test_domain(self):
        with pytest.raises(DomainError):
            analyze_second_order(1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            analyze_second_order(1.0, 1.0, -1.0)
        with pytest.raises(DomainError):
            analyze_second_order(-1.0, 1.0, 1.0)


class TestLinearLoop:
    R, L, C = 50.0, 0.5, 10e-6

    def run(self, dt, t_stop=0.1):
        circ = make_circuit(Waveform.step(0.0, 1.0, 0.0), self.R,
                            LinearInductor(self.L), self.C, dt, t_stop)
        return simulate_transient(compile_circuit(circ))

    def test_matches_analytic(self):
        tr = self.run(2e-5)
        t = tr.time
        vc_ref, i_ref = step_response(t, 1.0, self.R, self.L, self.C)
        assert np.max(np.abs(tr.signal("v_out") - vc_ref)) < 1e-8
        assert np.max(np.abs(tr.signal("i") - i_ref)) < 1e-8

    def test_fourth_order_convergence(self):
        errs = []
        for dt in (2e-4, 1e-4):
            tr = self.run(dt)
            vc_ref, _ = step_response(tr.time, 1.0, self.R, self.L, self.C)
            errs.append(np.max(np.abs(tr.signal("v_out") - vc_ref)))
        assert errs[0] / errs[1] >= 12.0

    def test_energy_conservation_undamped(self):
        # R = 0, L = C = 1, i(0) = 1: E = L i^2/2 + C vc^2/2 = 0.5 J
        T = 2 * math.pi
        circ = make_circuit(Waveform.constant(0.0), 0.0, LinearInductor(1.0),
                            1.0, T / 1000, 10 * T)
        tr = simulate_transient(compile_circuit(circ, initial=CircuitState(i=1.0)))
        e = 0.5 * tr.signal("i") ** 2 + 0.5 * tr.signal("v_out") ** 2
        assert np.max(np.abs(e - 0.5)) / 0.5 < 1e-6

    def test_ringdown_matches_analytics(self):
        tr = self.run(2e-5, t_stop=0.15)
        m = analyze_second_order(self.R, self.L, self.C)
        f, alpha = measure_ringdown(tr, "i")
        assert f == pytest.approx(m.fd, rel=0.01)
        assert alpha == pytest.approx(m.alpha, rel=0.05)

    def test_dt_precondition(self):
        with pytest.raises(ConfigError):
            self.run(0.02)  # dt > t_stop/10


class TestStaircase:
    def test_l_eff_sequence(self):
        src = Waveform.pulse(0.0, 1.0, 0.01, 0.001, 0.01, 3)
        circ = make_circuit(src, 10.0, StaircaseInductor(2.0, 0.2), 2.474e-6,
                            1e-5, 0.07)
        tr = simulate_transient(compile_circuit(circ))
        leff = tr.signal("l_eff")
        t = tr.time
        for lo, hi, expect in [(0.0, 0.01, 2.0), (0.01, 0.02, 1.6),
                               (0.02, 0.03, 1.28), (0.03, 0.07, 1.024)]:
            sel = (t >= lo) & (t < hi)
            assert np.allclose(leff[sel], expect, rtol=0, atol=1e-12)
        assert leff[-1] == pytest.approx(1.024, abs=1e-12)
        assert sorted(set(np.round(leff, 6))) == [1.024, 1.28, 1.6, 2.0]

    def test_f0_sequence_strictly_increasing(self):
        c = 2.474e-6
        f0s = [analyze_second_order(10.0, l, c).f0
               for l in (2.0, 1.6, 1.28, 1.024)]
        assert all(b > a for a, b in zip(f0s, f0s[1:]))
        assert f0s[0] == pytest.approx(71.6, rel=0.005)
        assert f0s[-1] == pytest.approx(100.0, rel=0.005)

    def test_delta_zero_keeps_l(self):
        src = Waveform.pulse(0.0, 1.0, 0.01, 0.001, 0.01, 3)
        circ = make_circuit(src, 10.0, StaircaseInductor(2.0, 0.0), 2.474e-6,
                            1e-5, 0.07)
        tr = simulate_transient(compile_circuit(circ))
        assert np.all(tr.signal("l_eff") == 2.0)


class TestCoilCoreLoop:
    def test_deep_saturation_is_rc(self):
        # phi'(q) ~ sech^2(20) ~ 1e-17: the loop degenerates to R-C
        params = CoilCoreParams(1e-3, 1e-3, 0.0)
        circ = make_circuit(Waveform.step(0.0, 1.0, 0.0), 10.0,
                            CoilCoreInductor(params), 1e-6, 1e-7, 1e-4)
        sys_ = compile_circuit(circ, initial=CircuitState(q=0.02))
        tr = simulate_transient(sys_)
        tau = 10.0 * 1e-6
        vc_ref = 1.0 - np.exp(-tr.time / tau)
        assert np.max(np.abs(tr.signal("v_out") - vc_ref)) < 1e-6

    def test_current_integrates_to_charge(self):
        params = CoilCoreParams(1e-3, 2e-3, -0.5)
        circ = make_circuit(Waveform.sine(0.0, 1.0, 100.0), 50.0,
                            CoilCoreInductor(params), 1e-5, 2e-6, 0.02)
        tr = simulate_transient(compile_circuit(circ))
        q = tr.signal("q")
        i = tr.signal("i")
        dt = tr.dt
        q_trap = q[0] + np.concatenate(
            ([0.0], np.cumsum((i[1:] + i[:-1]) * 0.5 * dt)))
        scale = np.max(np.abs(q - q[0]))
        assert np.max(np.abs(q_trap - q)) / scale <= 1e-6

    def test_no_l_eff_column(self):
        params = CoilCoreParams(1e-3, 1e-3, 0.0)
        circ = make_circuit(Waveform.constant(0.0), 10.0,
                            CoilCoreInductor(params), 1e-6, 1e-6, 1e-4)
        tr = simulate_transient(compile_circuit(circ))
        assert "l_eff" not in tr.columns
        line = tr.to_csv_text().splitlines()[1]
        assert line.endswith(",")  # empty l_eff field

    def test_stiffness_error(self):
        # R = 0 and the element saturates: denominator crosses the floor
        params = CoilCoreParams(1e-3, 1e-3, 0.0)
        circ = make_circuit(Waveform.step(0.0, 1.0, 0.0), 0.0,
                            CoilCoreInductor(params), 1.0, 1e-5, 0.02)
        with pytest.raises(SimulationError) as err:
            simulate_transient(compile_circuit(circ))
        assert err.value.code == "stiffness"
        assert err.value.time > 0
        assert "resistance" in str(err.value)


class TestDivergence:
    def test_unstable_step_reports_time(self):
        circ = make_circuit(Waveform.step(0.0, 1.0, 0.0), 0.0,
                            LinearInductor(1e-6), 1e-6, 1e-2, 1.0)
        with pytest.raises(SimulationError) as err:
            simulate_transient(compile_circuit(
                circ, initial=CircuitState(i=1.0)))
        assert err.value.code == "divergence"
        assert err.value.time is not None and err.value.time > 0


def synthetic_trace(f, alpha, dt=1e-3, t_stop=5.0):
    t = np.arange(0.0, t_stop + dt / 2, dt)
    y = np.exp(-alpha * t) * np.sin(2 * math.pi * f * t)
    return Trace(dt=dt, columns={"time": t, "v_out": y})


class TestRingdown:
    def test_synthetic_ground_truth(self):
        tr = synthetic_trace(1.59105, 0.25)
        f, alpha = measure_ringdown(tr, "v_out")
        assert f == pytest.approx(1.59105, rel=0.01)
        assert alpha == pytest.approx(0.25, rel=0.05)

    def test_pure_sine_has_no_decay(self):
        tr = synthetic_trace(2.0, 0.0)
        f, alpha = measure_ringdown(tr, "v_out")
        assert abs(alpha) <= 1e-3
        assert f == pytest.approx(2.0, rel=0.01)

    def test_constant_signal_rejected(self):
        t = np.arange(0.0, 1.0, 1e-3)
        tr = Trace(dt=1e-3, columns={"time": t, "v_out": np.ones_like(t)})
        with pytest.raises(SimulationError) as err:
            measure_ringdown(tr, "v_out")
        assert err.value.code == "insufficient-data"

    def test_unknown_signal(self):
        tr = synthetic_trace(1.0, 0.0)
        with pytest.raises(KeyError):
            measure_ringdown(tr, "nope")


class TestEnvelope:
    def test_decaying_sine(self):
        tr = synthetic_trace(10.0, 1.0, dt=1e-4, t_stop=2.0)
        t_pk, amp = envelope(tr, "v_out")
        assert np.all(np.abs(amp / np.exp(-t_pk) - 1.0) < 0.02)

    def test_flat_sine(self):
        tr = synthetic_trace(5.0, 0.0, dt=1e-4, t_stop=2.0)
        _, amp = envelope(tr, "v_out")
        assert np.all(np.abs(amp - 1.0) < 0.01)

    def test_monotone_nonincreasing(self):
        tr = synthetic_trace(10.0, 2.0, dt=1e-4, t_stop=1.0)
        _, amp = envelope(tr, "v_out")
        assert np.all(np.diff(amp) < 1e-9)


class TestTraceFormat:
    def test_header_and_grid(self):
        circ = make_circuit(Waveform.constant(0.0), 1.0, LinearInductor(1.0),
                            1.0, 0.01, 0.1)
        tr = simulate_transient(compile_circuit(circ))
        text = tr.to_csv_text()
        lines = text.splitlines()
        assert lines[0] == "time,v_in,i,v_out,q,l_eff"
        assert len(lines) == 12  # header + 11 samples
        t = tr.time
        assert np.allclose(t, np.arange(11) * 0.01, atol=0, rtol=1e-15)

    def test_print_subset_blanks_columns(self):
        circ = make_circuit(Waveform.constant(0.0), 1.0, LinearInductor(1.0),
                            1.0, 0.01, 0.1)
        tr = simulate_transient(compile_circuit(circ))
        text = tr.to_csv_text(signals=("time", "v_out"))
        row = text.splitlines()[1].split(",")
        assert row[1] == "" and row[2] == "" and row[4] == ""
        assert row[3] != ""
