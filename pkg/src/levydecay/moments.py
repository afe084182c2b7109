"""Exponential moments of the Levy density and the resolvent decay rate.

omega(xi) = int (cosh<xi,y> - 1) nu(dy) is finite for |xi| <= kappa when the
profile is f = exp(-kappa r) h(r).  Its radial section s -> omega(s theta) is
strictly convex on [0, kappa]; the decay rate gamma_alpha is its inverse,
capped at kappa.
"""

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, QuadratureError, UnsupportedProfileError
from .models import _norm, _quad, _split
from .quadrature import sphere_area, spherical_cosh_average_minus_one

DIVERGENCE_CAP = 1e12


@dataclass(frozen=True)
class OmegaEvaluation:
    value: float
    abs_error_estimate: float
    diverged: bool = False


@dataclass(frozen=True)
class DecayRateCurve:
    alphas: tuple
    rates: tuple
    theta: tuple
    kappa: float
    omega_star_kappa: float


def _require_exponential(model):
    if not model.is_exponential:
        raise UnsupportedProfileError(
            f"{model.profile.kind} profile is subexponential; omega is finite only at 0")


def _cosh_avg_scaled(z, d):
    """exp(-z) * spherical average of cosh, stable for large z."""
    z = np.asarray(z, dtype=float)
    if d == 1:
        return 0.5 * (1.0 + np.exp(-2.0 * z))
    order = d / 2.0 - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = special.gamma(d / 2.0) * (2.0 / z) ** order * special.ive(order, z)
    return np.where(z == 0, 1.0, out)


def _cosh_avg_derivative_scaled(z, d):
    """exp(-z) * d/dz of the spherical cosh average."""
    z = np.asarray(z, dtype=float)
    if d == 1:
        return 0.5 * (1.0 - np.exp(-2.0 * z))
    order = d / 2.0 - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = special.gamma(d / 2.0) * (2.0 / z) ** order * special.ive(order + 1, z)
    return np.where(z == 0, 0.0, out)


def omega_closed_form(model, s):
    p = model.profile
    if model.closed_form_psi != "relativistic":
        raise DomainError("closed-form omega exists only for the relativistic family")
    s = np.asarray(s, dtype=float)
    k2 = p.m ** (2.0 / p.beta)
    with np.errstate(invalid="ignore"):
        out = p.m - (k2 - s * s) ** (p.beta / 2.0)
    return np.where(np.abs(s) <= model.kappa, out, np.inf)


def omega_prime_closed_form(model, s):
    p = model.profile
    if model.closed_form_psi != "relativistic":
        raise DomainError("closed-form omega exists only for the relativistic family")
    k2 = p.m ** (2.0 / p.beta)
    s = np.asarray(s, dtype=float)
    return p.beta * s * (k2 - s * s) ** (p.beta / 2.0 - 1.0)


def _tail_power(model, s):
    """Log-slope of the tail integrand at |xi| = kappa (power-law decay exponent)."""
    d = model.dim
    r1, r2 = 1e3, 1e4
    g1 = _tail_integrand(model, s, r1)
    g2 = _tail_integrand(model, s, r2)
    if g1 <= 0 or g2 <= 0:
        return np.inf
    return -math.log(g2 / g1) / math.log(r2 / r1)


def _tail_integrand(model, s, r):
    d = model.dim
    r = np.asarray(r, dtype=float)
    k = model.kappa
    val = model.scaled_density(r) * (_cosh_avg_scaled(s * r, d) * np.exp((s - k) * r)
                                     - np.exp(-k * r))
    return val * r ** (d - 1)


def _radial_pieces(model, s, lo, hi):
    """Geometric pieces reaching past the decay length 1/(kappa - s) of the tail."""
    if not np.isinf(hi) or s >= model.kappa:
        return _split(lo, hi, 1.0)
    top = max(64.0 * max(lo, 1.0), 50.0 / (model.kappa - s))
    if top <= lo:
        return _split(lo, hi, 1.0)
    return _split(lo, top, 1.0) + [(top, hi)]


def _radial_integral(model, s, lo, hi, kernel):
    """A_d * int_lo^hi kernel(s, r) r^{d-1} dr with geometric splitting."""
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in _radial_pieces(model, s, lo, hi):
            v, e = _quad(lambda r: kernel(s, r) * np.asarray(r) ** (model.dim - 1), a, b,
                         epsrel=1e-12)
            total, err = total + v, err + e
    area = sphere_area(model.dim)
    return area * total, area * err


def _near_kernel(model):
    d = model.dim
    return lambda s, r: spherical_cosh_average_minus_one(s * np.asarray(r), d) * model.density(r)


def _far_kernel(model):
    d = model.dim
    k = model.kappa

    def g(s, r):
        r = np.asarray(r, dtype=float)
        z = s * r
        with np.errstate(over="ignore", invalid="ignore"):
            diff = _cosh_avg_scaled(z, d) * np.exp((s - k) * r) - np.exp(-k * r)
            # small s r: the difference above cancels, use the cosh - 1 series form
            small = np.exp(-k * r) * spherical_cosh_average_minus_one(np.minimum(z, 1.0), d)
            val = model.scaled_density(r) * np.where(z < 1.0, small, diff)
        return np.nan_to_num(val)
    return g


def omega(model, xi, method="auto"):
    """omega(xi); +inf with ``diverged=True`` beyond the exponential moment domain."""
    _require_exponential(model)
    s = _norm(xi)
    if s == 0:
        return OmegaEvaluation(0.0, 0.0, False)
    if method == "closed_form" or (method == "auto" and model.closed_form_psi == "relativistic"):
        val = float(omega_closed_form(model, s))
        return OmegaEvaluation(val, 0.0, not np.isfinite(val))
    return _omega_quadrature(model, s, 0.0, np.inf)


def _omega_quadrature(model, s, lo, hi):
    k = model.kappa
    if s > k * (1 + 1e-14) and hi == np.inf:
        return OmegaEvaluation(np.inf, np.inf, True)
    if hi == np.inf and s >= k * (1 - 1e-12) and _tail_power(model, s) <= 1.0 + 1e-3:
        return OmegaEvaluation(np.inf, np.inf, True)
    total, err = 0.0, 0.0
    if lo < 1.0:
        v, e = _radial_integral(model, s, lo, min(1.0, hi), lambda s_, r: _near_kernel(model)(s_, r))
        total, err = total + v, err + e
    if hi > 1.0:
        v, e = _radial_integral(model, s, max(lo, 1.0), hi, _far_kernel(model))
        total, err = total + v, err + e
    if not np.isfinite(total) or total > DIVERGENCE_CAP:
        return OmegaEvaluation(np.inf, np.inf, True)
    if err > 1e-7 * abs(total) + 1e-290:
        raise QuadratureError(f"omega quadrature did not converge at |xi|={s}", total, err)
    return OmegaEvaluation(total, err, False)


def omega_restricted(model, xi, r, side):
    """omega over |y| <= r (``side="small"``) or |y| > r (``side="large"``)."""
    if r <= 0:
        raise DomainError("r must be positive")
    s = _norm(xi)
    if s == 0:
        return OmegaEvaluation(0.0, 0.0, False)
    if side == "small":
        # compact domain: finite for every xi, no exponential-type requirement
        if r <= 1.0:
            v, e = _radial_integral(model, s, 0.0, r, _near_kernel(model))
        else:
            v1, e1 = _radial_integral(model, s, 0.0, 1.0, _near_kernel(model))
            v2, e2 = _radial_integral(model, s, 1.0, r, _near_kernel(model))
            v, e = v1 + v2, e1 + e2
        return OmegaEvaluation(v, e, not np.isfinite(v))
    if side == "large":
        _require_exponential(model)
        if r >= 1.0:
            return _omega_quadrature(model, s, r, np.inf)
        full = _omega_quadrature(model, s, r, np.inf)
        return full
    raise DomainError("side must be 'small' or 'large'")


def omega_prime(model, s, theta=None, method="quadrature"):
    """d/ds omega(s theta) for 0 < s < kappa."""
    _require_exponential(model)
    k = model.kappa
    s = float(s)
    if not 0 < s < k:
        raise DomainError("omega_prime needs 0 < s < kappa")
    if method == "closed_form":
        return float(omega_prime_closed_form(model, s))
    d = model.dim

    def near(s_, r):
        r = np.asarray(r, dtype=float)
        return r * _cosh_avg_derivative_scaled(s_ * r, d) * np.exp(s_ * r) * model.density(r)

    def far(s_, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            val = r * _cosh_avg_derivative_scaled(s_ * r, d) * np.exp((s_ - k) * r) \
                * model.scaled_density(r)
        return np.nan_to_num(val)

    v1, e1 = _radial_integral(model, s, 0.0, 1.0, near)
    v2, e2 = _radial_integral(model, s, 1.0, np.inf, far)
    total = v1 + v2
    if not np.isfinite(total) or total > DIVERGENCE_CAP:
        return np.inf
    if e1 + e2 > 1e-7 * total:
        raise QuadratureError("omega' quadrature did not converge", total, e1 + e2)
    return total


@functools.lru_cache(maxsize=256)
def _omega_star_cached(model, method):
    return omega(model, model.kappa, method=method).value


def omega_star(model, method="auto"):
    """Threshold omega*(kappa); radial models need a single evaluation."""
    _require_exponential(model)
    return _omega_star_cached(model, method)


def gamma_alpha(model, alpha, theta=None, method="auto"):
    """Decay rate: inverse of s -> omega(s theta) below the threshold, kappa above."""
    _require_exponential(model)
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    k = model.kappa
    wstar = omega_star(model, method)
    if alpha >= wstar:
        return k
    f = lambda s: omega(model, s, method=method).value - alpha
    return float(optimize.brentq(f, 0.0, k, xtol=1e-13 * k, rtol=1e-14, maxiter=200))


def decay_rate_curve(model, alphas, theta=None, method="auto"):
    alphas = tuple(float(a) for a in sorted(alphas))
    rates = tuple(gamma_alpha(model, a, method=method) for a in alphas)
    theta = tuple(theta) if theta is not None else (1.0,) + (0.0,) * (model.dim - 1)
    return DecayRateCurve(alphas, rates, theta, model.kappa, omega_star(model, method))


def exp_moment(model, xi):
    """int_{|y| >= 1} exp(<xi, y>) nu(y) dy, or +inf past the moment domain."""
    s = _norm(xi)
    d = model.dim
    k = model.kappa
    if s == 0:
        from .models import levy_tail_mass
        return levy_tail_mass(model, 1.0)
    if s > k * (1 + 1e-14):
        return np.inf
    if s >= k * (1 - 1e-12) and _tail_power(model, s) <= 1.0 + 1e-3:
        return np.inf

    def g(s_, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            val = _cosh_avg_scaled(s_ * r, d) * np.exp((s_ - k) * r) * model.scaled_density(r)
        return np.nan_to_num(val)

    v, e = _radial_integral(model, s, 1.0, np.inf, g)
    if not np.isfinite(v) or v > DIVERGENCE_CAP:
        return np.inf
    return v
