import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levydecay import (DomainError, InsufficientDataError, LevyModel, ProfileSpec,
                       UnsupportedProfileError, fit_exponential_rate, fit_powerlaw,
                       ratio_report, transition_sweep)
from levydecay.decay import default_window


@settings(max_examples=50, deadline=None)
@given(rate=st.floats(0.01, 3.0), power=st.floats(-3.0, 1.0), c=st.floats(-5.0, 5.0))
def test_exponential_fit_exact_on_synthetic(rate, power, c):
    x = np.linspace(1, 20, 40)
    v = np.exp(c - rate * x + power * np.log(x))
    fit = fit_exponential_rate(x, v)
    assert fit.rate == pytest.approx(rate, abs=1e-8)
    assert fit.power == pytest.approx(power, abs=1e-7)
    assert fit.rms_residual < 1e-10 and not fit.flagged


@settings(max_examples=50, deadline=None)
@given(power=st.floats(-4.0, -0.5), c=st.floats(-5.0, 5.0))
def test_powerlaw_fit_exact_on_synthetic(power, c):
    x = np.geomspace(2, 200, 30)
    fit = fit_powerlaw(x, np.exp(c) * x ** power)
    assert fit.power == pytest.approx(power, abs=1e-10)
    assert fit.rate == 0.0


def test_drop_and_flags():
    x = np.arange(1.0, 21.0)
    v = np.exp(-x)
    fit = fit_exponential_rate(x, v, power_correction=False)
    # nearest fifth dropped
    assert fit.window == (5.0, 20.0) and fit.n_points == 16
    flags = [""] * 8 + ["underflow"] * 12
    with pytest.raises(InsufficientDataError):
        fit_exponential_rate(x, v, flags=flags)
    with pytest.raises(DomainError):
        fit_powerlaw(x, -v)


def test_error_filter():
    x = np.arange(1.0, 31.0)
    v = np.exp(-x)
    errs = np.where(x > 20, v, 0.0)
    fit = fit_exponential_rate(x, v, errors=errs)
    assert fit.window[1] == 20.0


def test_ratio_report():
    x = np.linspace(1, 10, 10)
    rep = ratio_report(2 * x, x, points=x)
    assert rep.band == pytest.approx(1.0) and rep.inf_ratio == pytest.approx(2.0)
    rep = ratio_report(x ** 2, x, window=(2, 5), points=x)
    assert rep.band == pytest.approx(2.5)
    with pytest.raises(DomainError):
        ratio_report(x, -x)


def test_default_window():
    assert default_window([1, 10, 50], support=4) == (8.0, 50.0)


def test_transition_needs_exponential():
    with pytest.raises(UnsupportedProfileError):
        transition_sweep(LevyModel(1, ProfileSpec.pure_stable(1.0)), [1.0], [5, 6])


def test_transition_csv():
    model = LevyModel(1, ProfileSpec.relativistic(1.0, 1.0))
    curve = transition_sweep(model, [2.0, 0.5], np.linspace(5, 60, 56))
    assert curve.alphas == (0.5, 2.0)
    assert abs(curve.fitted_rates[0] - np.sqrt(0.75)) < 0.03
    assert curve.to_csv().splitlines()[0] == "alpha,fitted_rate,predicted_rate,residual"
