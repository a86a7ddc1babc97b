"""Compiled and pure-Python kernels must agree bit-for-bit-ish."""

import numpy as np
import pytest

from coilcore._kernels import _pyref

try:
    from coilcore._kernels import _fast
except ImportError:
    _fast = None

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled kernels unavailable")

SINE = (1, np.array([0.0, 1.0, 25.0]), np.empty(0), np.empty(0))
PULSE = (2, np.array([0.0, 1.0, 0.01, 0.001, 0.01, 3.0]), np.empty(0), np.empty(0))
PWL = (4, np.empty(0), np.array([0.0, 0.3, 1.0]), np.array([0.0, 1.0, -0.5]))


@needs_fast
@pytest.mark.parametrize("wf", [SINE, PULSE, PWL])
def test_wf_value_agrees(wf):
    t = np.linspace(0.0, 1.1, 997)
    a = np.array([_pyref.wf_value(*wf, x) for x in t])
    b = np.array([_fast.wf_value(*wf, x) for x in t])
    assert np.array_equal(a, b)


@needs_fast
def test_mag_rk4_agrees():
    a = _pyref.mag_rk4(*SINE, 1.0, -0.964, 1e-4, 5000)
    b = _fast.mag_rk4(*SINE, 1.0, -0.964, 1e-4, 5000)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-15)


@needs_fast
def test_rlc_rk4_agrees():
    upd = np.array([1000, 2000, 3000], dtype=np.int64)
    a = _pyref.rlc_rk4(*PULSE, 10.0, 2.474e-6, 2.0, 0.8, upd, 0.0, 0.0, 0.0,
                       1e-5, 7000)
    b = _fast.rlc_rk4(*PULSE, 10.0, 2.474e-6, 2.0, 0.8, upd, 0.0, 0.0, 0.0,
                      1e-5, 7000)
    assert a[4] == b[4] == 0
    for x, y in zip(a[:4], b[:4]):
        assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


@needs_fast
def test_coilcore_rk4_agrees():
    step = (3, np.array([0.0, 1.0, 0.0]), np.empty(0), np.empty(0))
    a = _pyref.coilcore_rk4(*step, 100.0, 1e-6, 1e-3, 5e6, -2.0, 0.0, 0.0,
                            1e-7, 4000, 1e-9)
    b = _fast.coilcore_rk4(*step, 100.0, 1e-6, 1e-3, 5e6, -2.0, 0.0, 0.0,
                           1e-7, 4000, 1e-9)
    assert a[3] == b[3] == 0
    for x, y in zip(a[:3], b[:3]):
        assert np.allclose(x, y, rtol=1e-12, atol=1e-16)


@needs_fast
def test_staircase_stage_bookkeeping_agrees():
    # update scheduled at step 0 must apply immediately in both backends
    const = (0, np.array([0.0]), np.empty(0), np.empty(0))
    upd = np.array([0, 50], dtype=np.int64)
    a = _pyref.rlc_rk4(*const, 0.0, 1.0, 2.0, 0.5, upd, 0.0, 1.0, 0.0, 1e-3, 100)
    b = _fast.rlc_rk4(*const, 0.0, 1.0, 2.0, 0.5, upd, 0.0, 1.0, 0.0, 1e-3, 100)
    assert a[3][0] == b[3][0] == 1.0
    assert a[3][-1] == b[3][-1] == 0.5
    assert np.allclose(a[1], b[1], rtol=1e-13)
