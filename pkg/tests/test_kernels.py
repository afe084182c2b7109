import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from levydecay import (DomainError, LevyModel, NonIntegrableSymbolError, ProfileSpec,
                       convolution_power_ratio, exp_upper_bound_check, heat_kernel,
                       heat_kernel_zero, jump_decomposition, kernel_mass, l1_certificate,
                       resolvent_freq, resolvent_time)
from levydecay.kernels import GridAliasingWarning

CAUCHY = LevyModel(1, ProfileSpec.pure_stable(1.0))
REL = LevyModel(1, ProfileSpec.relativistic(1.0, 1.0))
STABLE15 = LevyModel(1, ProfileSpec.pure_stable(1.5))


def cauchy_resolvent(alpha, x):
    """(1/pi) int_0^inf cos(u x) / (alpha + u) du via sine/cosine integrals."""
    si, ci = special.sici(alpha * x)
    return (-ci * np.cos(alpha * x) - (si - np.pi / 2) * np.sin(alpha * x)) / np.pi


def test_cauchy_heat_small_and_large_t():
    x = np.array([0.0, 0.3, 5.0, 100.0])
    for t in (0.01, 50.0):
        exact = t / (np.pi * (t * t + x * x))
        assert np.allclose(heat_kernel(CAUCHY, t, x).values, exact, rtol=1e-7)


def test_heat_zero_matches_grid():
    assert heat_kernel_zero(CAUCHY, 2.0) == pytest.approx(1 / (2 * np.pi), rel=1e-10)


def test_cauchy_heat_three_dimensions():
    model = LevyModel(3, ProfileSpec.pure_stable(1.0))
    r = np.array([0.5, 2.0, 6.0])
    exact = 1.0 / (np.pi ** 2 * (1 + r * r) ** 2)
    assert np.allclose(heat_kernel(model, 1.0, r).values, exact, rtol=1e-6)


def test_relativistic_heat_far_tail():
    x = np.array([50.0, 200.0])
    t = 0.1
    rr = np.sqrt(x * x + t * t)
    exact = t / np.pi * np.exp(t) * special.k1(rr) / rr
    assert np.allclose(heat_kernel(REL, t, x).values, exact, rtol=1e-6)


def test_cauchy_resolvent_oracle():
    x = np.array([1e-6, 1e-2, 0.5, 3.0, 40.0, 500.0])
    for a in (0.3, 2.0):
        assert np.allclose(resolvent_freq(CAUCHY, a, x).values, cauchy_resolvent(a, x),
                           rtol=1e-7)


def test_resolvent_singular_origin():
    g = resolvent_freq(CAUCHY, 1.0, [0.0])
    assert g.values[0] == np.inf and "singular" in g.flags[0]
    # beta > d: finite at the origin, (1/pi) int du / (1 + u^1.5)
    g = resolvent_freq(STABLE15, 1.0, [0.0])
    assert g.values[0] == pytest.approx(1 / (1.5 * math.sin(math.pi / 1.5)), rel=1e-8)


def test_nonintegrable_symbol_in_higher_dimension():
    model = LevyModel(2, ProfileSpec.pure_stable(1.0))
    with pytest.raises(NonIntegrableSymbolError):
        resolvent_freq(model, 1.0, [1.0])


def test_time_route_agrees():
    x = np.array([2.0, 7.0, 20.0])
    f = resolvent_time(CAUCHY, 1.0, x).values
    assert np.allclose(f, cauchy_resolvent(1.0, x), rtol=1e-5)


def test_masses():
    m, _ = kernel_mass(REL, "heat", 1.0)
    assert m == pytest.approx(1.0, abs=1e-8)
    m, _ = kernel_mass(CAUCHY, "resolvent", 0.5)
    assert m == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(DomainError):
        kernel_mass(CAUCHY, "other", 1.0)


def test_exp_bound_audit_and_domain():
    audit = exp_upper_bound_check(REL, 1.0, [0.5], np.linspace(0, 20, 21))
    assert audit.n_violations == 0
    assert np.all(audit.lhs <= audit.rhs + 1e-8)
    with pytest.raises(DomainError):
        exp_upper_bound_check(REL, 1.0, [1.5], [1.0])


def test_l1_certificate_bounded():
    c = l1_certificate(CAUCHY, [0.01, 1.0, 100.0])
    # Cauchy: p_t(0) = 1/(pi t), Psi*_-(1/t) = 1/t, so the ratio is exactly 2
    assert c == pytest.approx(2.0, rel=1e-8)


def test_jump_decomposition_cauchy():
    pts = np.linspace(0, 10, 11)
    # the 1/x^2 tail wraps a little mass around the periodic grid
    with pytest.warns(GridAliasingWarning):
        dec = jump_decomposition(CAUCHY, 1.0, 0.5, pts)
    exact = 0.5 / (np.pi * (0.25 + pts ** 2))
    assert np.allclose(dec.recombined.values, exact, rtol=1e-3)
    assert dec.big_mass == pytest.approx(2 / np.pi, rel=1e-10)
    assert dec.series_remainder < 1e-20
    with pytest.raises(DomainError):
        jump_decomposition(CAUCHY, 0.5, 0.5, pts)


def test_convolution_power_finite():
    ratio = convolution_power_ratio(STABLE15, 1.0, 2, np.linspace(1, 20, 20))
    assert np.all(np.isfinite(ratio)) and np.all(ratio > 0)


def test_csv_format():
    text = heat_kernel(CAUCHY, 1.0, [0.0, 1.0]).to_csv()
    lines = text.splitlines()
    assert lines[0] == "x,value,abs_error,flags"
    assert lines[1].startswith("0,0.31830988618379")
    assert len(lines) == 3


@settings(max_examples=25, deadline=None)
@given(x=st.floats(0.0, 40.0), t=st.floats(0.1, 5.0))
def test_heat_symmetric_positive(x, t):
    v = heat_kernel(REL, t, [x, -x]).values
    assert v[0] == v[1]
    assert v[0] > 0


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.0, 30.0), b=st.floats(0.0, 30.0))
def test_heat_radially_decreasing(a, b):
    lo, hi = sorted((a, b))
    v = heat_kernel(STABLE15, 1.0, [lo, hi]).values
    assert v[1] <= v[0] * (1 + 1e-9)
