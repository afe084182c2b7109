import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levydecay import (DomainError, LevyModel, ProfileSpec, UnsupportedProfileError,
                       classify_profile, comparability_constant, kf)
from levydecay.profiles import subexp_bound_certificate

TEMPERED = LevyModel(1, ProfileSpec.tempered_stable(1.0, 1.0, 0.5, 0.0))
CAUCHY = LevyModel(1, ProfileSpec.pure_stable(1.0))
REL = LevyModel(1, ProfileSpec.relativistic(1.0, 1.0))


def _cauchy_restricted_conv(x, r):
    """Exact restricted self-convolution of 1/(pi y^2) by partial fractions."""
    F = lambda y: ((-1 / y + 1 / (x - y)) / x ** 2
                   + 2 / x ** 3 * math.log(abs(y) / abs(x - y)))
    total = (F(-r) - 0.0) + (0.0 - F(x + r))
    if x > 2 * r:
        total += F(x - r) - F(r)
    return total / math.pi ** 2


@pytest.mark.parametrize("x", [3.0, 10.0, 60.0])
def test_kf_cauchy_exact(x):
    rep = kf(CAUCHY, 2.0, [x])
    assert rep.kf == pytest.approx(_cauchy_restricted_conv(x, 2.0) * math.pi * x * x, rel=1e-8)


def test_kf_tempered_decreases():
    values = [kf(TEMPERED, r).kf for r in (2, 8, 16)]
    assert values[0] > values[1] > values[2]


def test_kf_report_dict():
    rep = kf(TEMPERED, 4.0, [1.0, 2.0, 5.0])
    d = rep.to_dict()
    assert set(d) == {"r", "kf", "argmax_probe", "trend"}
    assert d["argmax_probe"] in (1.0, 2.0, 5.0)
    with pytest.raises(DomainError):
        kf(TEMPERED, 0.5)


def test_kf_higher_dimension_finite():
    model = LevyModel(2, ProfileSpec.tempered_stable(1.0, 1.0, 0.5, 0.0))
    rep = kf(model, 2.0, [1.0, 5.0, 20.0])
    assert np.isfinite(rep.kf) and rep.kf > 0


def test_comparability_constant():
    # f(s - 6)/f(s) = (s / (s - 6))^2 peaks at s = 18: (18/12)^2 = 2.25
    c = comparability_constant(CAUCHY, 6.0)
    assert c.value == pytest.approx(2.25, rel=1e-3)
    assert c.stabilized


def test_classification():
    c = classify_profile(REL.profile)
    assert c.kind == "exponential" and c.kappa == pytest.approx(1.0, rel=1e-3)
    assert classify_profile(CAUCHY.profile).kind == "subexponential"
    assert classify_profile(TEMPERED.profile).kind == "subexponential"
    assert c.to_dict()["class"] == "exponential"


def test_super_exponential_rejected():
    # probes default to the table radii, which span three decades
    r = np.geomspace(0.02, 20.0, 80)
    spec = ProfileSpec.tabulated(r, np.exp(-r ** 2))
    with pytest.raises(UnsupportedProfileError):
        classify_profile(spec)


def test_probe_span_required():
    with pytest.raises(DomainError):
        classify_profile(CAUCHY.profile, probe_radii=[1, 2, 3, 4, 5, 6])


def test_subexp_certificate():
    # f = e^{-sqrt r}: f e^{eps r} grows, the minimum sits at r = 1/(4 eps^2)
    spec = ProfileSpec.tempered_stable(1.0, 1.0, 0.5, 0.0)
    cert = subexp_bound_certificate(spec, 0.1, probe_radii=np.linspace(1, 200, 1991))
    assert cert.argmin_probe == pytest.approx(25.0, abs=0.2)
    assert not cert.flagged
    # an exponential profile with eps below its rate keeps decaying: flagged
    cert = subexp_bound_certificate(REL.profile, 0.5)
    assert cert.flagged


@settings(max_examples=10, deadline=None)
@given(r1=st.floats(1.0, 20.0), r2=st.floats(1.0, 20.0))
def test_kf_monotone_in_r(r1, r2):
    lo, hi = sorted((r1, r2))
    probes = [1.0, 3.0, 10.0, 30.0]
    assert kf(TEMPERED, hi, probes).kf <= kf(TEMPERED, lo, probes).kf * (1 + 1e-9)
