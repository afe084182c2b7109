"""Levy density profiles, models and characteristic exponents.

A model is a symmetric, pure-jump, radial Levy density ``nu`` on R^d together
with its profile ``f`` (the decreasing radial comparison function).  For the
pure stable family the two coincide; for the relativistic family ``nu`` is the
exact Bessel-K density and ``f`` the elementary profile it is comparable to.
"""

import functools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import warnings

import numpy as np
from scipy import integrate, interpolate, special

from .errors import BracketError, DomainError, QuadratureError
from .quadrature import oscillatory_integral, one_minus_spherical_cos, sphere_area, \
    spherical_cos_average

KINDS = ("tempered_stable", "pure_stable", "relativistic", "tabulated")

PSI_RTOL = 1e-10
CLOSED_FORM_TOL = 1e-6


@dataclass(frozen=True)
class ProfileSpec:
    """Parametric or tabulated decreasing profile of a Levy density.

    Use the class-method constructors; the raw fields are shared between kinds.
    """

    kind: str
    beta: Optional[float] = None
    kappa: Optional[float] = None
    eta: Optional[float] = None
    delta: Optional[float] = None
    m: Optional[float] = None
    radii: Optional[Tuple[float, ...]] = None
    values: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if self.kind != "tabulated":
            if self.beta is None or not 0 < self.beta < 2:
                raise DomainError("beta must lie in (0, 2)")
        if self.kind == "tempered_stable":
            if self.kappa is None or self.kappa <= 0:
                raise DomainError("kappa must be positive")
            if self.eta is None or not 0 < self.eta <= 1:
                raise DomainError("eta must lie in (0, 1]")
            if self.delta is None or self.delta < 0:
                raise DomainError("delta must be non-negative")
        elif self.kind == "relativistic":
            if self.m is None or self.m <= 0:
                raise DomainError("m must be positive")
        elif self.kind == "tabulated":
            r = np.asarray(self.radii, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if r.ndim != 1 or r.shape != v.shape or len(r) < 2:
                raise DomainError("tabulated profile needs matching radii/values, length >= 2")
            if np.any(r <= 0) or np.any(np.diff(r) <= 0):
                raise DomainError("radii must be positive and strictly ascending")
            if np.any(v <= 0) or np.any(np.diff(v) > 0):
                raise DomainError("values must be positive and non-increasing")

    @classmethod
    def tempered_stable(cls, beta, kappa, eta, delta):
        return cls("tempered_stable", beta=float(beta), kappa=float(kappa),
                   eta=float(eta), delta=float(delta))

    @classmethod
    def pure_stable(cls, beta):
        return cls("pure_stable", beta=float(beta))

    @classmethod
    def relativistic(cls, beta, m):
        return cls("relativistic", beta=float(beta), m=float(m))

    @classmethod
    def tabulated(cls, radii, values):
        return cls("tabulated", radii=tuple(float(r) for r in radii),
                   values=tuple(float(v) for v in values))

    def to_dict(self):
        out = {"kind": self.kind}
        for name in ("beta", "kappa", "eta", "delta", "m"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.kind == "tabulated":
            out["radii"] = list(self.radii)
            out["values"] = list(self.values)
        return out

    def evaluate(self, r, dim):
        """Profile f(r) for a density on R^dim (vectorised)."""
        r = np.asarray(r, dtype=float)
        if self.kind == "pure_stable":
            return stable_constant(dim, self.beta) * r ** (-dim - self.beta)
        if self.kind == "tabulated":
            return _tabulated_eval(self, r)
        if self.kind == "tempered_stable":
            near, far, decay = -dim - self.beta, -self.delta, self.kappa * r ** self.eta
        else:
            near, far = -dim - self.beta, -(dim + self.beta + 1) / 2.0
            decay = self.m ** (1.0 / self.beta) * r
        with np.errstate(divide="ignore"):
            power = np.where(r <= 1.0, r ** near, r ** far)
        return power * np.exp(-decay)

    def log_evaluate(self, r, dim):
        """log f(r), finite far beyond the floating-point range of f."""
        r = np.asarray(r, dtype=float)
        if self.kind == "pure_stable":
            return math.log(stable_constant(dim, self.beta)) - (dim + self.beta) * np.log(r)
        if self.kind == "tabulated":
            return _tabulated_log(self, r)
        if self.kind == "tempered_stable":
            near, far, decay = -dim - self.beta, -self.delta, self.kappa * r ** self.eta
        else:
            near, far = -dim - self.beta, -(dim + self.beta + 1) / 2.0
            decay = self.m ** (1.0 / self.beta) * r
        return np.where(r <= 1.0, near, far) * np.log(r) - decay

    @property
    def exp_rate(self):
        """kappa of the split f = exp(-kappa r) h(r); 0 for subexponential tails."""
        if self.kind == "tempered_stable":
            return self.kappa if self.eta == 1.0 else 0.0
        if self.kind == "relativistic":
            return self.m ** (1.0 / self.beta)
        if self.kind == "tabulated":
            r, v = np.asarray(self.radii), np.log(np.asarray(self.values))
            return max(0.0, -(v[-1] - v[-2]) / (r[-1] - r[-2]))
        return 0.0


def _tabulated_log(spec, r):
    # semi-log interpolation inside the table and beyond its last node;
    # log-log extrapolation below the first node keeps the origin singularity
    rad = np.asarray(spec.radii)
    lv = np.log(np.asarray(spec.values))
    out = np.interp(r, rad, lv)
    hi = r > rad[-1]
    slope = (lv[-1] - lv[-2]) / (rad[-1] - rad[-2])
    out = np.where(hi, lv[-1] + slope * (r - rad[-1]), out)
    lo = r < rad[0]
    lslope = (lv[1] - lv[0]) / (math.log(rad[1]) - math.log(rad[0]))
    with np.errstate(divide="ignore"):
        out = np.where(lo, lv[0] + lslope * (np.log(r) - math.log(rad[0])), out)
    return out


def _tabulated_eval(spec, r):
    return np.exp(_tabulated_log(spec, r))


def stable_constant(dim, beta):
    """c such that int (1 - cos<xi,y>) c |y|^{-d-beta} dy = |xi|^beta."""
    return (beta * 2.0 ** (beta - 1) * special.gamma((dim + beta) / 2.0)
            / (math.pi ** (dim / 2.0) * special.gamma(1 - beta / 2.0)))


def relativistic_constant(dim, beta, m):
    return (beta * 2.0 ** ((beta - dim) / 2.0) * m ** ((dim + beta) / (2 * beta))
            / (math.pi ** (dim / 2.0) * special.gamma(1 - beta / 2.0)))


@dataclass(frozen=True)
class PsiEvaluation:
    value: float
    abs_error_estimate: float
    method: str


@dataclass(frozen=True)
class LevyModel:
    """Radial symmetric pure-jump Levy model on R^dim.

    ``closed_form_psi`` is filled in automatically for the stable and
    relativistic families ("stable" / "relativistic").  Construction checks
    integrability of (1 ^ |y|^2) nu and, for closed-form models, that the
    quadrature exponent matches the closed form on a small probe set.
    """

    dim: int
    profile: ProfileSpec
    comparability: float = 1.0
    closed_form_psi: Optional[str] = None
    radial: bool = True
    validate: bool = True

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError("dim must be a positive integer")
        if self.comparability < 1:
            raise DomainError("comparability constant must be >= 1")
        if not self.radial and self.dim >= 2:
            raise DomainError("only radial densities are supported for dim >= 2")
        auto = {"pure_stable": "stable", "relativistic": "relativistic"}.get(self.profile.kind)
        if self.closed_form_psi is None and auto is not None:
            object.__setattr__(self, "closed_form_psi", auto)
        if self.closed_form_psi not in (None, "stable", "relativistic"):
            raise DomainError(f"unknown closed form {self.closed_form_psi!r}")
        if self.closed_form_psi is not None and self.closed_form_psi != auto:
            raise DomainError("closed form does not match the profile family")
        if self.validate:
            _check_levy_integrability(self)
            if self.closed_form_psi is not None:
                _cross_validate_closed_form(self)

    # -- densities ---------------------------------------------------------
    @property
    def kappa(self):
        return self.profile.exp_rate

    @property
    def is_exponential(self):
        return self.kappa > 0

    def profile_value(self, r):
        return self.profile.evaluate(r, self.dim)

    def density(self, r):
        """Exact radial Levy density nu(r) used for all integrals."""
        r = np.asarray(r, dtype=float)
        p = self.profile
        if p.kind == "relativistic":
            mu = (self.dim + p.beta) / 2.0
            c = relativistic_constant(self.dim, p.beta, p.m)
            return c * special.kv(mu, self.kappa * r) / r ** mu
        return self.profile_value(r)

    def scaled_density(self, r):
        """exp(kappa r) nu(r), finite at large r for exponential profiles."""
        r = np.asarray(r, dtype=float)
        p = self.profile
        k = self.kappa
        if p.kind == "relativistic":
            mu = (self.dim + p.beta) / 2.0
            c = relativistic_constant(self.dim, p.beta, p.m)
            return c * special.kve(mu, k * r) / r ** mu
        if k == 0:
            return self.density(r)
        return np.exp(p.log_evaluate(r, self.dim) + k * r)

    def to_dict(self):
        return {"dim": self.dim, "profile": self.profile.to_dict(),
                "comparability": self.comparability}


# -- construction-time checks ---------------------------------------------

def _check_levy_integrability(model):
    d = model.dim
    near, e1 = integrate.quad(lambda r: r ** 2 * model.density(r) * r ** (d - 1), 0, 1,
                              limit=200)
    far, e2 = integrate.quad(lambda r: model.density(r) * r ** (d - 1), 1, np.inf, limit=200)
    total = near + far
    if not np.isfinite(total) or e1 + e2 > 1e-3 * abs(total) + 1e-12:
        raise DomainError("int (1 ^ |y|^2) nu(y) dy is not finite for this profile")


def _cross_validate_closed_form(model):
    for xi in (0.5, 2.0):
        q = psi_quadrature(model, xi)
        c = psi_closed_form(model, xi)
        if abs(q.value - c) > CLOSED_FORM_TOL * (1 + c):
            raise QuadratureError(
                f"closed-form and quadrature exponents disagree at |xi|={xi}: {c} vs {q.value}",
                q.value, q.abs_error_estimate)


# -- characteristic exponent -------------------------------------------------

def psi_closed_form(model, xi):
    """Closed-form Psi at |xi| (vectorised; complex arguments allowed).

    For complex ``xi = u - i s`` this is the analytic continuation used by the
    tilted (contour-shifted) inversions.
    """
    p = model.profile
    if model.closed_form_psi == "stable":
        xi = np.asarray(xi)
        if np.iscomplexobj(xi):
            raise DomainError("the stable exponent has no analytic continuation off the real axis")
        return np.abs(xi) ** p.beta
    if model.closed_form_psi == "relativistic":
        k2 = p.m ** (2.0 / p.beta)
        xi = np.asarray(xi)
        if np.iscomplexobj(xi):
            return (xi * xi + k2) ** (p.beta / 2.0) - p.m
        return (xi * xi + k2) ** (p.beta / 2.0) - p.m
    raise DomainError("model has no closed-form exponent")


def _quad(f, a, b, **kw):
    if np.isinf(b) and a > 0 and "weight" not in kw:
        # r = a / u maps the tail onto (0, 1]; qagi is unreliable for large a
        def g(u):
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                val = f(a / u) * a / (u * u)
            return np.nan_to_num(val, nan=0.0, posinf=0.0)
        return _quad(g, 0.0, 1.0, **kw)
    kw.setdefault("limit", 400)
    kw.setdefault("epsabs", 1e-300)
    kw.setdefault("epsrel", 1e-12)
    v, e = integrate.quad(f, a, b, **kw)[:2]
    return v, e


def psi_quadrature(model, xi):
    """Psi(|xi|) by adaptive quadrature of the radial reduction."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _psi_quadrature(model, xi)


def _psi_quadrature(model, xi):
    xi = abs(float(xi))
    if xi == 0.0:
        return PsiEvaluation(0.0, 0.0, "quadrature")
    d = model.dim
    area = sphere_area(d)

    def w(r):
        return model.density(r) * r ** (d - 1)

    def nonosc(r):
        return one_minus_spherical_cos(xi * np.asarray(r), d) * w(r)

    c = 1.0 / xi
    total, err, mag = 0.0, 0.0, 0.0
    for a, b in _split(0.0, c, 1.0):
        v, e = _quad(nonosc, a, b)
        total, err, mag = total + v, err + e, mag + abs(v)
    # beyond c: int w - int Lambda(xi r) w
    for a, b in _split(c, np.inf, 1.0):
        v, e = _quad(w, a, b)
        total, err, mag = total + v, err + e, mag + abs(v)
    scale = max(abs(total), 1e-300)
    osc_pieces = [(c, 1.0), (1.0, np.inf)] if c < 1.0 else [(c, np.inf)]
    if d == 1:
        for a, b in osc_pieces:
            kw = dict(weight="cos", wvar=xi)
            if np.isinf(b):
                out = integrate.quad(w, a, np.inf, epsabs=max(1e-15 * scale, 1e-300),
                                     limlst=200, limit=400, full_output=1, **kw)
                v, e = out[:2]
                if len(out) > 3 or not np.isfinite(v) or abs(v) > 1e6 * scale:
                    # QAWF gives up on fast-decaying tails; use the panel engine
                    v, e = oscillatory_integral(
                        lambda s: np.cos(xi * (a + s)) * w(a + s), np.pi / xi,
                        scales=(1.0 / max(model.kappa, 1e-3),))
            else:
                v, e = integrate.quad(w, a, b, epsabs=1e-300, epsrel=1e-12, limit=400, **kw)[:2]
            total, err, mag = total - v, err + e, mag + abs(v)
    else:
        for a, b in osc_pieces:
            if np.isinf(b):
                v, e = oscillatory_integral(
                    lambda s: spherical_cos_average(xi * (a + s), d) * w(a + s),
                    np.pi / xi, scales=(1.0,))
            else:
                v, e = _quad(lambda r: spherical_cos_average(xi * r, d) * w(r), a, b)
            total, err, mag = total - v, err + e, mag + abs(v)
    value, err = area * total, area * err
    if err > 1e-6 * abs(value) + 1e-13 * area * mag + 1e-300:
        raise QuadratureError(f"Psi quadrature did not converge at |xi|={xi}", value, err)
    return PsiEvaluation(max(value, 0.0), err, "quadrature")


def _split(a, b, point, ratio=8.0):
    """Subintervals of (a, b) broken at ``point`` and on geometric grids."""
    top = b if np.isfinite(b) else 64.0 * max(a, point)
    cuts = {a, b}
    if a < point < b:
        cuts.add(point)
    for start in (a, point):
        x = start * ratio
        while start > 0 and x < top:
            if x > a:
                cuts.add(x)
            x *= ratio
    cuts = sorted(cuts)
    return list(zip(cuts[:-1], cuts[1:]))


def psi(model, xi, method="auto"):
    """Characteristic exponent at a point ``xi`` (scalar |xi| or a vector)."""
    r = _norm(xi)
    if method == "closed_form" or (method == "auto" and model.closed_form_psi):
        return PsiEvaluation(float(psi_closed_form(model, r)), 0.0, "closed_form")
    return psi_quadrature(model, r)


def _norm(xi):
    return float(np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float))))


@functools.lru_cache(maxsize=64)
def _psi_table(model):
    """Spline of log Psi against log |xi| for models without a closed form."""
    lx = np.linspace(math.log(1e-6), math.log(1e8), 281)
    lv = np.array([math.log(psi_quadrature(model, math.exp(v)).value) for v in lx])
    return interpolate.CubicSpline(lx, lv), lx, lv


def psi_fast(model, xi):
    """Vectorised Psi for use inside inversions (closed form or cached spline)."""
    xi = np.abs(np.asarray(xi, dtype=float))
    if model.closed_form_psi:
        return psi_closed_form(model, xi)
    spline, lx, lv = _psi_table(model)
    out = np.zeros_like(xi)
    pos = xi > 0
    l = np.log(xi[pos])
    inner = np.clip(l, lx[0], lx[-1])
    val = spline(inner)
    lo_slope = (lv[1] - lv[0]) / (lx[1] - lx[0])
    hi_slope = (lv[-1] - lv[-2]) / (lx[-1] - lx[-2])
    val = np.where(l < lx[0], lv[0] + lo_slope * (l - lx[0]), val)
    val = np.where(l > lx[-1], lv[-1] + hi_slope * (l - lx[-1]), val)
    out[pos] = np.exp(val)
    return out


@functools.lru_cache(maxsize=64)
def _psi_monotone(model):
    probe = np.geomspace(1e-4, 1e6, 400)
    return bool(np.all(np.diff(psi_fast(model, probe)) >= 0))


def psi_star(model, r):
    """Maximal function sup_{|xi| <= r} Psi(xi)."""
    r = float(r)
    if r <= 0:
        return 0.0
    val = float(psi_fast(model, r))
    if _psi_monotone(model):
        return val
    probe = r * np.concatenate([[0.0], 2.0 ** -np.arange(30, -1, -1)])
    probe = np.unique(np.concatenate([probe, np.linspace(0, r, 257)]))
    return float(max(val, np.max(psi_fast(model, probe))))


def psi_star_inv(model, s, rtol=1e-12):
    """Generalised inverse sup{r > 0 : Psi*(r) = s}, by bracketed bisection."""
    s = float(s)
    if s <= 0:
        raise DomainError("psi_star_inv needs s > 0")
    return _psi_star_inv_cached(model, s, rtol)


@functools.lru_cache(maxsize=4096)
def _psi_star_inv_cached(model, s, rtol):
    lo, hi = 0.0, 1.0
    grow = 0
    while psi_star(model, hi) <= s:
        lo, hi = hi, hi * 4.0
        grow += 1
        if grow > 200:
            raise BracketError(f"Psi* stays below {s}")
    # sup of the level set: move right while Psi* == s
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if psi_star(model, mid) <= s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            break
    return hi


def estimate_lower_scaling(model, r_grid=None, lambda_grid=None, step=0.05, stability=0.9):
    """Empirical lower scaling pair (C2, alpha) with Psi*(lr) >= C2 l^alpha Psi*(r).

    An exponent is accepted when the infimum over the probed pairs has
    stabilised: the infimum over lambda <= sqrt(Lambda_max) and over the full
    lambda range agree within the factor ``stability``.  Returns
    (C2, alpha, degenerate_flag).
    """
    r_grid = np.geomspace(1e-3, 1e3, 61) if r_grid is None else np.asarray(r_grid, float)
    lambda_grid = np.geomspace(1.0, 1e4, 41) if lambda_grid is None \
        else np.asarray(lambda_grid, float)
    if len(r_grid) == 0 or len(lambda_grid) == 0 or np.any(lambda_grid < 1):
        raise DomainError("grids must be nonempty with lambda >= 1")
    base = np.array([psi_star(model, r) for r in r_grid])
    scaled = np.array([[psi_star(model, l * r) for r in r_grid] for l in lambda_grid])
    ratio_base = scaled / base[None, :]
    lam = lambda_grid[:, None]
    half = lambda_grid <= math.sqrt(lambda_grid.max())
    for alpha in np.round(np.arange(2.0, step / 2, -step), 10):
        ratio = ratio_base / lam ** alpha
        c_full = float(ratio.min())
        c_half = float(ratio[half].min())
        if c_full > 0 and c_full >= stability * c_half:
            return min(c_full, 1.0), float(alpha), False
    ratio = ratio_base / lam ** step
    return max(float(ratio.min()), 1e-300), step, True


def heat_scale_constant(model, c2, alpha):
    """Constructive C5 with 1/Psi*_-(1/t) <= C5 t^{1/alpha} for t >= 1/c1."""
    c1 = psi_star(model, 1.0) / c2
    return c1 ** (1.0 / alpha), 1.0 / c1


def nu_density(model, x):
    """Profile value f(|x|) at a nonzero point (the radial representative of nu)."""
    r = _norm(x)
    if r == 0:
        raise DomainError("nu is singular at the origin")
    return float(model.profile_value(r))


def levy_tail_mass(model, r):
    """|bar nu_r| = nu({|y| > r})."""
    d = model.dim
    v, _ = _quad(lambda s: model.density(s) * s ** (d - 1), r, np.inf)
    return sphere_area(d) * v


def comparability_estimate(model, probes=None):
    """max over probes of max(nu/f, f/nu); 1 when nu equals its profile."""
    probes = np.geomspace(1e-3, 50, 200) if probes is None else np.asarray(probes)
    ratio = model.density(probes) / model.profile_value(probes)
    ratio = ratio[np.isfinite(ratio) & (ratio > 0)]
    return float(max(ratio.max(), (1 / ratio).max(), 1.0))
