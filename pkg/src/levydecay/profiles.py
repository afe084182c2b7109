"""Profile functionals: K_f, the shift comparability constant and tail classification."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError, UnsupportedProfileError
from .models import _quad
from .quadrature import sphere_area

TREND_TOL = 1e-3


@dataclass(frozen=True)
class KfReport:
    r: float
    kf: float
    argmax_probe: float
    trend: str
    probes: tuple = ()
    values: tuple = ()

    @property
    def attained_at_largest_probe(self):
        return bool(self.probes) and self.argmax_probe == self.probes[-1]

    def to_dict(self):
        return {"r": self.r, "kf": self.kf, "argmax_probe": self.argmax_probe,
                "trend": self.trend}


@dataclass(frozen=True)
class ComparabilityConstant:
    r: float
    value: float
    argmax: float
    stabilized: bool


@dataclass(frozen=True)
class ProfileClassification:
    kind: str                 # subexponential | exponential | super_exponential_rejected
    kappa: float
    h_tail_slope_probe: tuple
    limit_estimate: float

    def to_dict(self):
        out = {"class": self.kind, "h_tail_slope_probe": list(self.h_tail_slope_probe)}
        if self.kind == "exponential":
            out["kappa"] = self.kappa
        return out


@dataclass(frozen=True)
class SubexpCertificate:
    epsilon: float
    value: float
    argmin_probe: float
    trend: str
    flagged: bool


def _trend(values):
    if len(values) < 2:
        return "flat"
    a, b = values[-2], values[-1]
    if b > a * (1 + TREND_TOL):
        return "increasing"
    if b < a * (1 - TREND_TOL):
        return "decreasing"
    return "flat"


def _interior_point(a, b):
    if np.isinf(a):
        return b - 1.0
    if np.isinf(b):
        return a + 1.0
    return 0.5 * (a + b)


def _restricted_conv_1d(f, x, r):
    """int over {|y| > r, |y - x| > r} of f(|x - y|) f(|y|) dy on the line."""
    g = lambda y: f(np.abs(x - y)) * f(np.abs(y))
    cuts = sorted({-r, r, x - r, x + r})
    inside = lambda y: abs(y) > r and abs(y - x) > r
    total, err = 0.0, 0.0
    pieces = [(-np.inf, cuts[0])] + list(zip(cuts[:-1], cuts[1:])) + [(cuts[-1], np.inf)]
    for a, b in pieces:
        if b <= a:
            continue
        mid = _interior_point(a, b)
        if not inside(mid):
            continue
        if np.isinf(a):
            v, e = _quad(lambda u: g(-u), -b, np.inf)
        elif np.isinf(b):
            v, e = _quad(g, a, np.inf)
        else:
            v, e = _quad(g, a, b)
        total, err = total + v, err + e
    return total, err


def _restricted_conv_radial(f, x, r, d):
    """Same integral in R^d with x = |x| e_1, reduced to (rho, phi) coordinates."""
    ring = sphere_area(d - 1)

    def inner(rho):
        c = (x * x + rho * rho - r * r) / (2 * x * rho)
        phi_c = math.acos(min(1.0, max(-1.0, c)))
        if phi_c >= math.pi:
            return 0.0
        h = lambda phi: f(math.sqrt(max(x * x + rho * rho - 2 * x * rho * math.cos(phi), 0.0))) \
            * math.sin(phi) ** (d - 2)
        v, _ = integrate.quad(h, phi_c, math.pi, limit=64, epsrel=1e-10)
        return v * f(rho) * rho ** (d - 1)

    cuts = sorted({r, max(r, x - r), max(r, x + r)})
    total, err = 0.0, 0.0
    for a, b in list(zip(cuts[:-1], cuts[1:])) + [(cuts[-1], np.inf)]:
        if b <= a:
            continue
        v, e = integrate.quad(inner, a, b, limit=64, epsrel=1e-9)
        total, err = total + v, err + e
    return ring * total, ring * err


def kf(model, r, x_probe=None):
    """Finite-probe estimate of K_f(r) = sup_{|x| >= 1} (f_r * f_r)(x) / f(|x|)."""
    if r < 1:
        raise DomainError("K_f needs r >= 1")
    probes = np.geomspace(1.0, 100.0, 25) if x_probe is None else np.asarray(x_probe, float)
    if np.any(probes < 1):
        raise DomainError("probe radii must be >= 1")
    f = lambda s: model.profile_value(s)
    d = model.dim
    vals = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for x in probes:
            if d == 1:
                v, e = _restricted_conv_1d(f, float(x), float(r))
            else:
                v, e = _restricted_conv_radial(lambda s: float(f(s)), float(x), float(r), d)
            if not np.isfinite(v) or e > 1e-6 * abs(v) + 1e-300:
                raise QuadratureError(f"K_f integral did not converge at |x|={x}", v, e)
            vals.append(v / float(f(x)))
    vals = np.array(vals)
    i = int(np.argmax(vals))
    return KfReport(float(r), float(vals[i]), float(probes[i]), _trend(vals),
                    tuple(float(p) for p in probes), tuple(float(v) for v in vals))


def comparability_constant(model, r, per_decade=200, max_decades=12):
    """sup_{s >= 3r} f(s - r) / f(s), grown decade by decade until it stabilises."""
    if r <= 0:
        raise DomainError("r must be positive")
    lf = lambda s: model.profile.log_evaluate(s, model.dim)
    history = []
    best, arg = -np.inf, 3 * r
    for k in range(1, max_decades + 1):
        s = np.geomspace(3 * r * 10 ** (k - 1), 3 * r * 10 ** k, per_decade)
        ratio = np.exp(lf(s - r) - lf(s))
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best, arg = float(ratio[j]), float(s[j])
        history.append(best)
        if len(history) >= 4 and all(abs(history[-1] / h - 1) < 1e-2 for h in history[-4:-1]):
            return ComparabilityConstant(float(r), max(best, 1.0), arg, True)
    return ComparabilityConstant(float(r), max(best, 1.0), arg, False)


def _richardson_limit(r, q):
    """Fit q(r) = L + a log(r)/r + b/r and return L."""
    A = np.column_stack([np.ones_like(r), np.log(r) / r, 1.0 / r])
    coef, *_ = np.linalg.lstsq(A, q, rcond=None)
    return float(coef[0])


def classify_profile(profile, probe_radii=None, dim=1):
    """Subexponential / exponential (with kappa) / rejected super-exponential tail."""
    if probe_radii is None:
        probes = np.geomspace(1.0, 1e6, 121)
        if profile.kind == "tabulated":
            probes = np.asarray(profile.radii, dtype=float)
    else:
        probes = np.sort(np.asarray(probe_radii, dtype=float))
    if len(probes) < 6 or probes[-1] / probes[0] < 999.0:
        raise DomainError("probe radii must span at least three decades")
    lf = np.asarray(profile.log_evaluate(probes, dim), dtype=float)
    q = lf / probes
    # super-exponential: r dq/dr stays comparable to |q| while q keeps falling
    sens = np.gradient(q, np.log(probes))
    if q[-1] < q[-2] and sens[-1] / abs(q[-1]) < -0.1:
        raise UnsupportedProfileError("super-exponential profile: log f(r)/r -> -inf")
    tail = probes >= probes[-1] / 1e3
    limit = _richardson_limit(probes[tail], q[tail])
    earlier = probes[np.searchsorted(probes, probes[-1] / 1e3)]
    rho = q[-1] / np.interp(earlier, probes, q) if np.interp(earlier, probes, q) != 0 else 0.0
    if limit < -1e-6 and rho > 0.8:
        kappa = -limit
        logh = lf + kappa * probes
        slope = tuple(float(v) for v in (logh / probes)[-5:])
        return ProfileClassification("exponential", kappa, slope, limit)
    slope = tuple(float(v) for v in q[-5:])
    return ProfileClassification("subexponential", 0.0, slope, limit)


def subexp_bound_certificate(profile, epsilon, probe_radii=None, dim=1):
    """C = min over probes of f(r) e^{eps r}; flagged when the tail trend decreases."""
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    probes = np.geomspace(1.0, 1e3, 61) if probe_radii is None \
        else np.sort(np.asarray(probe_radii, dtype=float))
    logv = np.asarray(profile.log_evaluate(probes, dim), dtype=float) + epsilon * probes
    i = int(np.argmin(logv))
    trend = _trend(np.exp(logv[-2:] - logv[-1]))
    return SubexpCertificate(float(epsilon), float(math.exp(logv[i])), float(probes[i]),
                             trend, trend == "decreasing")
