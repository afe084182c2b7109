import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from levydecay.quadrature import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, fourier_cos_inverse,
                                  hankel_radial_inverse, integrate, iterated_average,
                                  one_minus_spherical_cos, spherical_cos_average,
                                  spherical_cosh_average_minus_one)


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    # Gauss 7 is exact to degree 13
    assert GAUSS_WEIGHTS @ NODES ** 12 == pytest.approx(2 / 13, rel=1e-13)


def test_integrate_polynomial_and_exp():
    v, e = integrate(lambda u: np.exp(-u), np.linspace(0, 30, 31))
    assert v == pytest.approx(1 - math.exp(-30), rel=1e-14)
    assert e < 1e-10


def test_iterated_average_alternating_series():
    # partial sums of 1 - 1/2 + 1/3 - ... converge to log 2
    s = np.cumsum([(-1) ** k / (k + 1) for k in range(30)])
    v, _ = iterated_average(s, 12)
    assert v == pytest.approx(math.log(2), abs=1e-9)


def test_fourier_inverse_of_exp():
    # (1/pi) int cos(ux) e^{-u} du = 1 / (pi (1 + x^2))
    for x in (0.1, 2.0, 50.0):
        v, _ = fourier_cos_inverse(lambda u: np.exp(-u), x)
        assert v == pytest.approx(1 / (math.pi * (1 + x * x)), rel=1e-10)


def test_fourier_inverse_slow_decay():
    # (1/pi) int cos(ux) / (1 + u) du, a slowly decaying symbol
    x = 3.0
    si, ci = special.sici(x)
    exact = (-ci * math.cos(x) - (si - math.pi / 2) * math.sin(x)) / math.pi
    v, _ = fourier_cos_inverse(lambda u: 1 / (1 + u), x)
    assert v == pytest.approx(exact, rel=1e-9)


def test_hankel_three_dimensions():
    # radial inverse transform of e^{-rho} in R^3 is 1 / (pi^2 (1 + r^2)^2)
    for r in (0.5, 4.0):
        v, _ = hankel_radial_inverse(lambda p: np.exp(-p), r, 3)
        assert v == pytest.approx(1 / (math.pi ** 2 * (1 + r * r) ** 2), rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(z=st.floats(0.0, 50.0), d=st.integers(1, 5))
def test_spherical_averages_consistent(z, d):
    z = np.array([z])
    assert np.allclose(1 - spherical_cos_average(z, d), one_minus_spherical_cos(z, d),
                       atol=1e-12)
    assert abs(spherical_cos_average(z, d)[0]) <= 1 + 1e-12
    assert spherical_cosh_average_minus_one(z, d)[0] >= 0


def test_spherical_average_d3():
    z = np.array([0.5, 3.0])
    assert np.allclose(spherical_cos_average(z, 3), np.sin(z) / z, rtol=1e-13)
