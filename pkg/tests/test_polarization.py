from __future__ import annotations

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracem.fraccalc import SampledSignal, apply_gl
from fracem.polarization import (
    EPSILON_0,
    AliasingWarning,
    polarization,
    polarization_high,
    polarization_low,
    polarization_spectral,
)
from fracem.susceptibility import HighFreqModel, LowFreqModel, chi_high, susceptibility

HIGH = HighFreqModel(1.3, 0.5)
LOW = LowFreqModel(2.0, 0.7, 0.5)


def pulse(n: int, periods: float = 40.0, carrier: float = 2 * np.pi) -> SampledSignal:
    """Gaussian-modulated carrier centred in a window of `periods` carrier periods."""
    t_end = periods * 2 * np.pi / carrier
    t = np.linspace(0.0, t_end, n, endpoint=False)
    tc, width = 0.5 * t_end, 0.08 * t_end
    values = np.exp(-0.5 * ((t - tc) / width) ** 2) * np.sin(carrier * (t - tc))
    return SampledSignal(0.0, t[1], values)


def interior_error(a: SampledSignal, b: SampledSignal) -> float:
    n = len(a)
    sl = slice(n // 4, 3 * n // 4)
    return float(np.max(np.abs(a.values[sl] - b.values[sl])) / np.max(np.abs(b.values[sl])))


def test_eps0_is_si_value():
    assert EPSILON_0 == pytest.approx(8.8541878128e-12, rel=1e-9)


@pytest.mark.parametrize("model", [HIGH, LOW])
def test_zero_field_gives_zero(model):
    e = SampledSignal(0.0, 0.1, np.zeros(64))
    assert np.all(polarization(e, model).p.values == 0)
    assert np.all(polarization_spectral(e, model).p.values == 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.integers(4, 200))
def test_linearity(a, b, n):
    rng = np.random.default_rng(n)
    e1, e2 = (SampledSignal(0.0, 0.05, v) for v in rng.normal(size=(2, n)))
    for model in (HIGH, LOW):
        combo = polarization(e1.with_values(a * e1.values + b * e2.values), model, eps0=1.0)
        sep = a * polarization(e1, model, eps0=1.0).p.values + b * polarization(
            e2, model, eps0=1.0
        ).p.values
        np.testing.assert_allclose(combo.p.values, sep, atol=1e-10 * (abs(a) + abs(b) + 1) * n)


@pytest.mark.parametrize("model", [HIGH, LOW])
def test_causality(model):
    rng = np.random.default_rng(1)
    v = rng.normal(size=400)
    w = v.copy()
    w[250:] = 0.0
    a = polarization(SampledSignal(0.0, 0.01, v), model).p.values
    b = polarization(SampledSignal(0.0, 0.01, w), model).p.values
    np.testing.assert_array_equal(a[:250], b[:250])


@pytest.mark.parametrize("model", [HIGH, LOW])
def test_time_invariance_under_grid_shift(model):
    rng = np.random.default_rng(2)
    v = rng.normal(size=300)
    shift = 37
    a = polarization(SampledSignal(0.0, 0.01, v), model, eps0=1.0).p.values
    b = polarization(SampledSignal(0.0, 0.01, np.r_[np.zeros(shift), v]), model, eps0=1.0).p.values
    np.testing.assert_array_equal(b[:shift], 0.0)
    np.testing.assert_allclose(b[shift:], a, rtol=1e-13, atol=1e-13 * np.max(np.abs(a)))


def test_high_regime_is_scaled_fractional_integral():
    e = pulse(512)
    p = polarization_high(e, HIGH, eps0=2.0).p.values
    np.testing.assert_allclose(p, 2.0 * HIGH.chi_alpha * apply_gl(e, -HIGH.alpha).values)


@pytest.mark.parametrize("model", [HIGH, LOW])
def test_time_domain_converges_to_spectral_first_order(model):
    errs = []
    for n in (2048, 4096, 8192):
        e = pulse(n)
        errs.append(interior_error(polarization(e, model, eps0=1.0).p,
                                   polarization_spectral(e, model, eps0=1.0).p))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    np.testing.assert_allclose(rates, 1.0, atol=0.1)
    assert errs[-1] < 1e-2


def test_narrowband_amplitude_and_phase():
    w0 = 3.0
    n, dt = 1 << 14, 0.01
    t = dt * np.arange(n)
    window = np.sin(np.pi * t / t[-1]) ** 2
    e = SampledSignal(0.0, dt, window * np.sin(w0 * t))
    p = polarization_spectral(e, HIGH, eps0=1.0).p.values
    chi = chi_high(HIGH, w0).value
    expected = window * np.abs(chi) * np.sin(w0 * t + np.angle(chi))
    mid = slice(n // 2 - 2000, n // 2 + 2000)
    assert np.max(np.abs(p[mid] - expected[mid])) < 0.01 * np.abs(chi)


def test_quasi_static_low_regime():
    dt, n = 0.05, 40000
    t = dt * np.arange(n)
    e = SampledSignal(0.0, dt, np.clip(t / 5.0, 0.0, 1.0))
    p = polarization_low(e, LOW, eps0=1.0).p.values
    assert p[-1] / e.values[-1] == pytest.approx(LOW.chi0, rel=0.01)


@pytest.mark.parametrize("model", [HIGH, LOW])
def test_spectral_parseval(model):
    e = pulse(1024)
    pad = 4
    p = polarization_spectral(e, model, eps0=1.0, pad_factor=pad, full=True).p.values
    size = pad * len(e)
    spec = np.fft.fft(e.values, size)
    omega = 2 * np.pi * np.fft.fftfreq(size, e.dt)
    lhs = np.sum(p**2)
    rhs = np.sum(np.abs(susceptibility(model, omega)) ** 2 * np.abs(spec) ** 2) / size
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_aliasing_warning():
    rng = np.random.default_rng(0)
    e = SampledSignal(0.0, 0.1, rng.normal(size=256))
    with pytest.warns(AliasingWarning):
        polarization_spectral(e, LOW)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        polarization_spectral(pulse(1024), LOW)


def test_pad_factor_minimum():
    with pytest.raises(ValueError):
        polarization_spectral(pulse(64), LOW, pad_factor=2)


def test_unknown_model():
    with pytest.raises(TypeError):
        polarization(pulse(64), object())
