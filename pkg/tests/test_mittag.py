from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfcx, rgamma

from fracem.mittag import (
    ASYMPTOTIC_RADIUS,
    SERIES_RADIUS,
    ConvergenceError,
    MLParams,
    mittag_leffler,
    ml_relaxation_kernel,
)

# (alpha, beta, z, E) from an independent 60+ digit series summation
FROZEN = [
    (0.5, 1.0, -1.0, 0.427583576155807),
    (0.3, 0.7, -7.0, 0.061864078401023869),
    (0.45, 1.0, -3.0, 0.18786184545630398),
    (0.8, 1.2, -20.0, 0.023238133596947878),
    (1.25, 1.25, -4.0, 0.018703624180829224),
    (1.5, 1.5, -50.0, -0.00028331106562273091),
    (1.75, 1.75, -10.0, -0.12402681974927354),
    (1.5, 2.0, 2.5, 2.0755856575544465),
    (0.7, 0.7, -0.3, 0.50431812480151065),
    (2.5, 1.0, -30.0, -2.2413251918675952),
    (0.9, 1.9, -45.0, 0.022168298315445594),
    (1.1, 0.4, 3.0, 25.053699064204408),
]


@pytest.mark.parametrize("alpha, beta, z, expected", FROZEN)
def test_frozen_reference_values(alpha, beta, z, expected):
    assert mittag_leffler(z, alpha, beta) == pytest.approx(expected, rel=1e-10)


def test_exponential():
    z = np.linspace(-20, 5, 20)
    np.testing.assert_allclose(mittag_leffler(z, 1.0, 1.0), np.exp(z), rtol=1e-10)


def test_cosine():
    x = np.linspace(0.1, 7.0, 20)
    np.testing.assert_allclose(mittag_leffler(-(x**2), 2.0, 1.0), np.cos(x), rtol=1e-10, atol=1e-12)


def test_sinc():
    x = np.linspace(0.1, 7.0, 20)
    np.testing.assert_allclose(mittag_leffler(-(x**2), 2.0, 2.0), np.sin(x) / x, rtol=1e-10, atol=1e-12)


def test_half_order_erfc_identity():
    # E_{1/2,1}(-x) = exp(x^2) erfc(x)
    assert mittag_leffler(-1.0, 0.5) == pytest.approx(0.4275836, abs=1e-6)
    x = np.linspace(0.05, 7.0, 25)
    np.testing.assert_allclose(mittag_leffler(-x, 0.5), erfcx(x), rtol=1e-10)


def test_beta_two_closed_form():
    z = np.array([-30.0, -3.0, -0.5, 0.5, 2.0])
    np.testing.assert_allclose(mittag_leffler(z, 1.0, 2.0), np.expm1(z) / z, rtol=1e-10)


def test_zero_argument():
    assert mittag_leffler(0.0, 0.7, 1.6) == pytest.approx(rgamma(1.6), rel=1e-15)


def test_complex_argument():
    y = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(mittag_leffler(1j * y, 1.0), np.exp(1j * y), rtol=1e-10)


def test_real_in_real_out_and_shape():
    out = mittag_leffler(np.zeros((2, 3)), 0.5)
    assert out.shape == (2, 3) and out.dtype == np.float64
    assert isinstance(mittag_leffler(-1.0, 0.5), float)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.3, 2.0),
    st.floats(0.3, 2.0),
    st.floats(-50.0, 5.0),
)
def test_recurrence(alpha, beta, z):
    lhs = mittag_leffler(z, alpha, beta)
    tail = z * mittag_leffler(z, alpha, alpha + beta)
    head = rgamma(beta)
    assert abs(lhs - (tail + head)) <= 1e-9 * max(abs(lhs), abs(tail), abs(head))


@pytest.mark.parametrize("alpha", [0.4, 0.6, 0.9, 1.3, 1.8])
@pytest.mark.parametrize("beta", [0.5, 1.0, 1.7])
def test_series_and_asymptotic_agree_in_overlap(alpha, beta):
    # radius |z|^(1/alpha) where the expansion has converged to 1e-8; the
    # series side runs in extended precision there
    for radius in np.linspace(30.0, 45.0, 4):
        z = -(radius**alpha)
        series = mittag_leffler(z, alpha, beta, method="series")
        asym = mittag_leffler(z, alpha, beta, method="asymptotic", tol=1e-8)
        assert asym == pytest.approx(series, rel=1e-8)


@settings(deadline=None)
@given(st.floats(0.2, 1.0))
def test_monotone_decay(alpha):
    t = np.linspace(0.01, 20, 60)
    e = mittag_leffler(-(t**alpha), alpha)
    assert np.all(e > 0)
    assert np.all(np.diff(e) < 0)


def test_switch_radii_are_ordered():
    assert 0 < ASYMPTOTIC_RADIUS < SERIES_RADIUS


def test_asymptotic_path_refuses_small_arguments():
    with pytest.raises(ConvergenceError):
        mittag_leffler(-0.5, 0.8, 1.0, method="asymptotic")


def test_invalid_parameters():
    with pytest.raises(ValueError):
        MLParams(0.0)
    with pytest.raises(ValueError):
        MLParams(3.5)
    with pytest.raises(ValueError):
        MLParams(1.0, math.inf)
    with pytest.raises(ValueError):
        mittag_leffler(np.inf, 1.0)
    with pytest.raises(ValueError):
        mittag_leffler(1.0, 1.0, method="other")


# -- relaxation kernel -------------------------------------------------------------


def test_kernel_exponential():
    t = np.linspace(0.1, 10, 30)
    np.testing.assert_allclose(ml_relaxation_kernel(1.0, 0.7, t), np.exp(-0.7 * t), rtol=1e-10)


def test_kernel_wave():
    k = 1.3
    t = np.linspace(0.1, 6, 30)
    np.testing.assert_allclose(
        ml_relaxation_kernel(2.0, k * k, t), np.sin(k * t) / k, rtol=1e-9, atol=1e-12
    )


def test_kernel_tail_exponent():
    # E_{a,a}(-x) ~ -x^-2 / Gamma(-a), so the kernel decays like t^-(a+1)
    alpha = 1.5
    t = np.geomspace(30, 300, 64)
    u = ml_relaxation_kernel(alpha, 1.0, t)
    slope = np.polyfit(np.log(t), np.log(np.abs(u)), 1)[0]
    assert slope == pytest.approx(-(alpha + 1), abs=0.05)
    lead = -(t**alpha) ** -2 * t ** (alpha - 1) * rgamma(-alpha)
    np.testing.assert_allclose(u, lead, rtol=0.05)


def test_kernel_rejects_bad_input():
    with pytest.raises(ValueError):
        ml_relaxation_kernel(3.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ml_relaxation_kernel(1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        ml_relaxation_kernel(1.5, 1.0, 0.0)
