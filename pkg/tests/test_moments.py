import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from levydecay import (DomainError, LevyModel, ProfileSpec, UnsupportedProfileError,
                       decay_rate_curve, exp_moment, gamma_alpha, omega, omega_prime,
                       omega_restricted, omega_star)

REL = LevyModel(1, ProfileSpec.relativistic(1.0, 1.0))
TEMPERED = LevyModel(1, ProfileSpec.tempered_stable(1.0, 1.0, 1.0, 2.0))


def _omega_oracle_1d(model, s):
    """2 int_0^inf (cosh(s r) - 1) nu(r) dr with plain QUADPACK."""
    k = model.kappa

    def f(r):
        # e^{-kappa r} (cosh(s r) - 1) written without overflow
        c = 0.5 * (math.exp((s - k) * r) + math.exp(-(s + k) * r)) - math.exp(-k * r)
        return 2 * c * float(model.scaled_density(r))
    return integrate.quad(f, 0, 1, epsrel=1e-12)[0] + integrate.quad(f, 1, np.inf,
                                                                       epsrel=1e-12)[0]


def test_relativistic_quadrature_vs_closed_form():
    for s in (0.1, 0.5, 0.9, 0.999):
        q = omega(REL, s, method="quadrature").value
        assert q == pytest.approx(1 - math.sqrt(1 - s * s), rel=1e-9)


def test_tempered_omega_oracle():
    for s in (0.3, 0.8, 1.0):
        assert omega(TEMPERED, s).value == pytest.approx(_omega_oracle_1d(TEMPERED, s), rel=1e-7)


def test_threshold_finite_when_tail_integrable():
    # delta = 2: h(r) = r^-2 keeps omega(kappa) finite
    assert np.isfinite(omega_star(TEMPERED))
    assert omega_star(REL) == pytest.approx(1.0)


def test_threshold_divergent_tail():
    # delta = 0.5: int e^{kappa r} f = int r^-1/2 diverges
    model = LevyModel(1, ProfileSpec.tempered_stable(1.0, 1.0, 1.0, 0.5))
    ev = omega(model, 1.0, method="quadrature")
    assert ev.diverged and ev.value == np.inf
    # omega* = inf, so gamma stays below kappa but approaches it as alpha grows
    g = gamma_alpha(model, 50.0)
    assert 0.99 < g < 1.0
    assert omega(model, g).value == pytest.approx(50.0, rel=1e-9)


def test_beyond_kappa_is_infinite():
    assert omega(TEMPERED, 1.5).diverged
    assert exp_moment(REL, 1.2) == np.inf


def test_omega_prime_closed_form_and_difference():
    for s in (0.2, 0.6, 0.95):
        assert omega_prime(REL, s) == pytest.approx(s / math.sqrt(1 - s * s), rel=1e-9)
    h = 1e-5
    fd = (omega(TEMPERED, 0.3 + h).value - omega(TEMPERED, 0.3 - h).value) / (2 * h)
    assert omega_prime(TEMPERED, 0.3) == pytest.approx(fd, rel=1e-6)
    with pytest.raises(DomainError):
        omega_prime(REL, 1.0)


def test_restricted_pieces_add_up():
    for r in (0.5, 1.0, 4.0):
        small = omega_restricted(TEMPERED, 0.7, r, "small").value
        large = omega_restricted(TEMPERED, 0.7, r, "large").value
        assert small + large == pytest.approx(omega(TEMPERED, 0.7).value, rel=1e-9)


def test_gamma_values():
    # alpha = 1 - sqrt(1 - s^2)  =>  s = sqrt(2 alpha - alpha^2)
    for a in (0.1, 0.5, 0.99):
        assert gamma_alpha(REL, a) == pytest.approx(math.sqrt(2 * a - a * a), abs=1e-10)
    assert gamma_alpha(REL, 3.0) == 1.0
    with pytest.raises(DomainError):
        gamma_alpha(REL, 0.0)


def test_subexponential_rejected():
    model = LevyModel(1, ProfileSpec.pure_stable(1.0))
    with pytest.raises(UnsupportedProfileError):
        omega(model, 0.1)
    with pytest.raises(UnsupportedProfileError):
        gamma_alpha(model, 1.0)


def test_three_dimensional_relativistic():
    model = LevyModel(3, ProfileSpec.relativistic(1.0, 1.0))
    for s in (0.3, 0.8):
        assert omega(model, s, method="quadrature").value == pytest.approx(
            1 - math.sqrt(1 - s * s), rel=1e-7)


def test_decay_rate_curve_sorted():
    c = decay_rate_curve(REL, [2.0, 0.5, 0.25])
    assert c.alphas == (0.25, 0.5, 2.0)
    assert c.rates[-1] == 1.0 and c.omega_star_kappa == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.01, 0.98), b=st.floats(0.01, 0.98), t=st.floats(0.0, 1.0))
def test_omega_convex(a, b, t):
    w = lambda s: omega(REL, s, method="quadrature").value
    assert w(t * a + (1 - t) * b) <= t * w(a) + (1 - t) * w(b) + 1e-12


@settings(max_examples=20, deadline=None)
@given(s=st.floats(0.01, 0.9))
def test_omega_symmetric(s):
    assert omega(TEMPERED, [s]).value == omega(TEMPERED, [-s]).value


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.01, 3.0), b=st.floats(0.01, 3.0))
def test_gamma_monotone(a, b):
    lo, hi = sorted((a, b))
    assert gamma_alpha(REL, lo) <= gamma_alpha(REL, hi) + 1e-12
    assert gamma_alpha(REL, hi) <= REL.kappa


def test_example_values():
    assert omega(REL, 0.0).value == 0.0
    assert omega(REL, 0.6, method="quadrature").value == pytest.approx(0.2, rel=1e-10)
    # threshold equals m for the relativistic family; beta = 0.5, m = 2 has kappa = 4
    model = LevyModel(1, ProfileSpec.relativistic(0.5, 2.0))
    assert omega_star(model, method="quadrature") == pytest.approx(2.0, rel=1e-8)
    assert omega_restricted(REL, 0.0, 1.0, "small").value == 0.0
    assert np.isfinite(omega_restricted(REL, 2.0, 5.0, "small").value)
