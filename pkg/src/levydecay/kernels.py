"""Heat kernels p_t and resolvent kernels g_alpha.

Both are inverse Fourier transforms of radial symbols: exp(-t Psi) and
1/(alpha + Psi).  In d = 1 the cosine transform is summed panel by panel
between zeros of cos(x u); in d >= 2 the Hankel transform is used.  For the
relativistic family Psi extends analytically to the strip |Im| < kappa and the
contour is shifted to Im u = -s, which factors out exp(-s x) and keeps
relative accuracy in the far tail where the untilted integral would cancel.
"""

import functools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate, optimize, stats

from .errors import (CutoffError, DomainError, NonIntegrableSymbolError,
                     QuadratureError)
from .models import (_norm, _quad, _split, estimate_lower_scaling, levy_tail_mass,
                     psi_closed_form, psi_fast, psi_star, psi_star_inv)
from .moments import gamma_alpha, omega, omega_prime_closed_form
from .quadrature import (fourier_cos_inverse, hankel_radial_inverse, integrate_panels,
                         sphere_area)

TOL = 1e-14
SAFETY = 4.0
SMALL_TIME_CUTOFF = 1e7
UNDERFLOW = 1e-280
TILT_CAP = 0.999


class GridAliasingWarning(UserWarning):
    """Convolution support exceeds the periodic grid."""


@dataclass(frozen=True)
class KernelGrid:
    kind: str
    param: float
    points: np.ndarray
    values: np.ndarray
    error_estimates: np.ndarray
    method: str
    flags: tuple = ()

    def __post_init__(self):
        if self.kind not in ("heat", "resolvent"):
            raise DomainError("kind must be 'heat' or 'resolvent'")
        if not self.flags:
            object.__setattr__(self, "flags", ("",) * len(self.points))

    def to_csv(self, path=None):
        lines = ["x,value,abs_error,flags"]
        for x, v, e, f in zip(self.points, self.values, self.error_estimates, self.flags):
            lines.append(f"{x:.17g},{v:.17g},{e:.17g},{f}")
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_dict(self):
        return {"kind": self.kind, "param": self.param, "method": self.method,
                "points": [float(x) for x in self.points],
                "values": [float(v) for v in self.values],
                "abs_errors": [float(e) for e in self.error_estimates],
                "flags": list(self.flags)}


@dataclass(frozen=True)
class JumpDecomposition:
    r: float
    big_mass: float
    poisson_terms: int
    small_grid: KernelGrid
    big_grid: KernelGrid
    recombined: KernelGrid
    series_remainder: float = 0.0
    aliased_mass: float = 0.0
    total_mass: float = float("nan")


@dataclass(frozen=True)
class BoundAudit:
    points: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    max_violation: float
    n_violations: int
    tol: float
    extras: dict = field(default_factory=dict)


def _finalize(kind, param, points, results, method):
    vals = np.array([r[0] for r in results], dtype=float)
    errs = np.array([r[1] for r in results], dtype=float)
    flags = [r[2] for r in results]
    neg = vals < 0
    for i in np.flatnonzero(neg):
        flags[i] = (flags[i] + ";clamped").lstrip(";")
    vals[neg] = 0.0
    return KernelGrid(kind, float(param), np.asarray(points, dtype=float), vals, errs,
                      method, tuple(flags))


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(v) for v in items]


def _radius(model, x):
    """Radial coordinate of a point; 1-D scalars keep their sign-free value."""
    return _norm(x)


# -- heat kernel ---------------------------------------------------------------

def frequency_cutoff(model, t, tol=TOL):
    """R(t) = safety * Psi*_-(ln(1/tol)/t), checked against exp(-t Psi*(R)) <= tol."""
    level = math.log(1.0 / tol) / t
    cut = SAFETY * psi_star_inv(model, level)
    if math.exp(-t * psi_star(model, cut)) > tol:
        raise CutoffError(f"exp(-t Psi*) exceeds {tol} at the cutoff {cut}")
    return cut


def _heat_tilt(model, t, x):
    """Saddle-point tilt s with omega'(s) = x/t, capped below kappa."""
    if model.closed_form_psi != "relativistic" or x <= 0:
        return 0.0
    k = model.kappa
    top = TILT_CAP * k
    target = x / t
    if float(omega_prime_closed_form(model, top)) <= target:
        return top
    return float(optimize.brentq(lambda s: float(omega_prime_closed_form(model, s)) - target,
                                 0.0, top, xtol=1e-12 * k))


def _heat_scales(model, t):
    scales = [psi_star_inv(model, 1.0 / t)]
    if model.kappa > 0:
        scales.append(model.kappa)
    return tuple(scales)


@functools.lru_cache(maxsize=200000)
def _heat_point(model, t, x, tol):
    """(value, abs_error, flag) of p_t at radius x."""
    if x == 0:
        v = heat_kernel_zero(model, t)
        return v, 1e-13 * v, ""
    cut = frequency_cutoff(model, t, tol)
    if cut > SMALL_TIME_CUTOFF:
        v = float(model.density(x))
        return t * v, t * t * v, "small_time"
    d = model.dim
    if d == 1:
        s = _heat_tilt(model, t, x)
        if s > 0:
            sym = lambda u: np.exp(-t * psi_closed_form(model, u - 1j * s))
        else:
            sym = lambda u: np.exp(-t * psi_fast(model, u))
        scales = _heat_scales(model, t)
        if s > 0:
            scales += ((model.kappa ** 2 - s * s) / model.kappa,)
        integral, err = fourier_cos_inverse(sym, x, scales=scales, cutoff=cut)
        if integral <= 0:
            return integral, err, "underflow" if abs(integral) <= err else ""
        logv = -s * x + math.log(integral)
        if logv < math.log(UNDERFLOW):
            return 0.0, 0.0, "underflow"
        scale = math.exp(-s * x)
        return scale * integral, scale * err, ""
    sym = lambda rho: np.exp(-t * psi_fast(model, rho))
    v, e = hankel_radial_inverse(sym, x, d, scales=_heat_scales(model, t), cutoff=cut)
    if abs(v) < UNDERFLOW:
        return 0.0, 0.0, "underflow"
    return v, e, ""


@functools.lru_cache(maxsize=4096)
def heat_kernel_zero(model, t):
    """p_t(0) = (2 pi)^{-d} int exp(-t Psi(xi)) d xi."""
    if t <= 0:
        raise DomainError("t must be positive")
    d = model.dim
    mid = psi_star_inv(model, 1.0 / t)
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in _split(0.0, np.inf, mid, ratio=4.0):
            v, e = _quad(lambda u: np.exp(-t * psi_fast(model, u)) * np.asarray(u) ** (d - 1),
                         a, b, epsrel=1e-13)
            total, err = total + v, err + e
    if err > 1e-9 * total:
        raise QuadratureError("p_t(0) quadrature did not converge", total, err)
    return sphere_area(d) / (2 * math.pi) ** d * total


def heat_kernel(model, t, points, tol=TOL, workers=1):
    """Heat kernel p_t on the given points (scalars in 1-D, radii or vectors in d >= 2)."""
    if t <= 0:
        raise DomainError("t must be positive")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    radii = [_radius(model, p) for p in (pts if pts.ndim == 1 else pts)]
    results = _map(lambda r: _heat_point(model, float(t), float(r), tol), radii, workers)
    method = "fourier_1d" if model.dim == 1 else "hankel_radial"
    return _finalize("heat", t, pts if pts.ndim == 1 else np.array(radii), results, method)


# -- resolvent -----------------------------------------------------------------

def _resolvent_tilt(model, alpha, x, margin=2.0):
    if model.closed_form_psi != "relativistic" or x <= 0:
        return 0.0
    g = gamma_alpha(model, alpha, method="closed_form")
    return max(0.0, g - margin / x)


@functools.lru_cache(maxsize=64)
def _scaling_exponent(model):
    return estimate_lower_scaling(model)[1]


@functools.lru_cache(maxsize=100000)
def _resolvent_point(model, alpha, x):
    d = model.dim
    if x == 0:
        if _scaling_exponent(model) <= d:
            return np.inf, 0.0, "singular"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            total = 0.0
            for a, b in _split(0.0, np.inf, psi_star_inv(model, alpha), ratio=4.0):
                total += _quad(lambda u: np.asarray(u) ** (d - 1) / (alpha + psi_fast(model, u)),
                               a, b)[0]
        return sphere_area(d) / (2 * math.pi) ** d * total, 1e-10 * total, ""
    scales = [psi_star_inv(model, alpha), 1.0]
    if d == 1:
        s = _resolvent_tilt(model, alpha, x)
        if s > 0:
            sym = lambda u: 1.0 / (alpha + psi_closed_form(model, u - 1j * s))
            scales += [model.kappa, model.kappa - s]
        else:
            sym = lambda u: 1.0 / (alpha + psi_fast(model, u))
        integral, err = fourier_cos_inverse(sym, x, scales=tuple(scales))
        if integral <= 0:
            return integral, err, "underflow" if abs(integral) <= err else ""
        if -s * x + math.log(integral) < math.log(UNDERFLOW):
            return 0.0, 0.0, "underflow"
        scale = math.exp(-s * x)
        return scale * integral, scale * err, ""
    sym = lambda rho: 1.0 / (alpha + psi_fast(model, rho))
    v, e = hankel_radial_inverse(sym, x, d, scales=tuple(scales))
    return v, e, ""


def resolvent_freq(model, alpha, points, workers=1):
    """g_alpha by oscillatory inversion of 1/(alpha + Psi)."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    d = model.dim
    if d >= 2 and _scaling_exponent(model) <= d:
        raise NonIntegrableSymbolError(
            "1/(alpha + Psi) is not integrable in this dimension; use resolvent_time")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    radii = [_radius(model, p) for p in pts]
    results = _map(lambda r: _resolvent_point(model, float(alpha), float(r)), radii, workers)
    method = "fourier_1d" if d == 1 else "hankel_radial"
    return _finalize("resolvent", alpha, pts if pts.ndim == 1 else np.array(radii),
                     results, method)


def _time_nodes(alpha, t_min, t_max, per_panel=8, width=1.0):
    lo, hi = math.log(t_min), math.log(t_max)
    n = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, n + 1)
    x, w = np.polynomial.legendre.leggauss(per_panel)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    return np.exp(u), wu * np.exp(u)


def _resolvent_time_point(model, alpha, x, t_min, t_max, tol):
    if x == 0:
        return _resolvent_point(model, alpha, 0.0)
    ts, ws = _time_nodes(alpha, t_min, t_max)
    total, err = 0.0, 0.0
    for t, w in zip(ts, ws):
        v, e, _ = _heat_point(model, float(t), float(x), tol)
        damp = math.exp(-alpha * t)
        total += w * damp * max(v, 0.0)
        err += w * damp * e
    # small-time surrogate p_t(x) ~ t nu(x) below t_min
    nu = float(model.density(x))
    a = alpha * t_min
    head = nu * (-math.expm1(-a) - a * math.exp(-a)) / alpha ** 2
    err += head * t_min * (1.0 + 1.0 / max(x, 1e-300))
    tail = math.exp(-alpha * t_max) / alpha * heat_kernel_zero(model, t_max)
    return total + head, err + tail, ""


def resolvent_time(model, alpha, points, t_min=0.01, t_max=None, tol=TOL, workers=1):
    """g_alpha = int_0^inf exp(-alpha t) p_t dt with t = exp(u) and Gauss-Legendre panels."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    t_max = 40.0 / alpha if t_max is None else t_max
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    radii = [_radius(model, p) for p in pts]
    results = _map(lambda r: _resolvent_time_point(model, float(alpha), float(r), t_min,
                                                   t_max, tol), radii, workers)
    return _finalize("resolvent", alpha, pts if pts.ndim == 1 else np.array(radii),
                     results, "time_quadrature")


# -- jump decomposition ----------------------------------------------------------

def _big_jump_masses(model, r, h, half_width):
    """Cell masses of nu restricted to |y| > r on the grid j*h, j >= 0 (one side)."""
    n = int(round(half_width / h))
    centers = h * np.arange(n + 1)
    masses = np.zeros(n + 1)
    j0 = int(math.floor(r / h + 0.5))
    if j0 > n:
        return centers, masses
    upper = (j0 + 0.5) * h
    if upper > r:
        masses[j0] = _quad(model.density, r, upper)[0]
    edges = (np.arange(j0 + 1, n + 1) - 0.5) * h
    edges = np.append(edges, (n + 0.5) * h)
    if len(edges) > 1:
        vals, _ = integrate_panels(model.density, edges)
        masses[j0 + 1:] = vals
    return centers, masses


def _psi_small(model, r, u):
    """Psi_r(u) = int_{|y| <= r} (1 - cos u y) nu(y) dy for d = 1, vectorised in u."""
    u = np.asarray(u, dtype=float)
    umax = max(float(np.max(np.abs(u))), 1.0)
    a = 1e-12
    y1 = min(r, 0.5 / umax)
    geo = np.geomspace(a, y1, max(2, int(math.ceil(math.log2(y1 / a))) + 1))
    uni = np.linspace(y1, r, max(2, int(math.ceil((r - y1) * umax / 0.5)) + 1))
    edges = np.unique(np.concatenate([geo, uni]))
    from .quadrature import KRONROD_WEIGHTS, panel_nodes
    nodes, half = panel_nodes(edges)
    weights = (half[:, None] * KRONROD_WEIGHTS[None, :]).ravel()
    nodes = nodes.ravel()
    wnu = weights * model.density(nodes)
    # local power law of nu near 0 for the piece (0, a)
    p = math.log(float(model.density(a)) / float(model.density(2 * a))) / math.log(2.0)
    head = float(model.density(a)) * a ** 3 / (3.0 - p)
    out = np.empty_like(u)
    chunk = max(1, 4_000_000 // len(nodes))
    for i in range(0, len(u), chunk):
        uu = u[i:i + chunk, None]
        out[i:i + chunk] = (2.0 * np.sin(0.5 * uu * nodes[None, :]) ** 2) @ wnu
    return 2.0 * (out + 0.5 * u * u * head)


def _fft_grid(h, half_width):
    m = 1 << int(math.ceil(math.log2(4 * half_width / h)))
    return m


def _periodic_from_half(half_vals, m):
    """Place an even function given on j >= 0 into a length-m periodic array."""
    arr = np.zeros(m)
    n = len(half_vals)
    arr[:n] = half_vals
    arr[m - n + 1:] = half_vals[1:][::-1]
    return arr


def jump_decomposition(model, r, t, points, n_terms=30, h=0.01, half_width=2000.0):
    """Small/large jump split p_t = e^{-t|bar nu|} p~ + p~ * bar P, evaluated on a grid.

    The small-jump density p~ is the inverse transform of exp(-t Psi_r); the
    compound-Poisson part is the truncated series of convolution powers of the
    big-jump cell masses (products of their discrete transforms).
    """
    if model.dim != 1:
        raise DomainError("jump_decomposition is implemented for d = 1")
    if r < 1 or t <= 0 or n_terms < 1:
        raise DomainError("need r >= 1, t > 0, n_terms >= 1")
    m = _fft_grid(h, half_width)
    centers, half_masses = _big_jump_masses(model, r, h, half_width)
    masses = _periodic_from_half(half_masses, m)
    big_mass = levy_tail_mass(model, r)
    mhat = np.fft.rfft(masses).real

    u = 2 * math.pi * np.fft.rfftfreq(m, d=h)
    level = (math.log(1e18) + t * big_mass) / t
    ucut = SAFETY * psi_star_inv(model, level)
    sym = np.zeros_like(u)
    keep = u <= ucut
    # Psi_r is entire (compact jump support): spline it from a coarse grid
    coarse = np.linspace(0.0, ucut, 4001)
    spline = interpolate.CubicSpline(coarse, _psi_small(model, r, coarse))
    sym[keep] = np.exp(-t * spline(u[keep]))
    small = np.fft.irfft(sym, n=m) / h

    term = np.ones_like(mhat)
    series = np.zeros_like(mhat)
    for n in range(1, n_terms + 1):
        term = term * (t * mhat) / n
        series += term
    decay = math.exp(-t * big_mass)
    big = np.fft.irfft(decay * series, n=m) / h
    conv = np.fft.irfft(sym * decay * series, n=m) / h
    recombined = decay * small + conv

    remainder = float(stats.poisson.sf(n_terms, t * big_mass))
    period_half = m * h / 2.0
    aliased = 0.0
    for n in range(2, n_terms + 1):
        reach = (period_half - half_width) / n
        if reach <= r:
            continue
        w = stats.poisson.pmf(n, t * big_mass)
        aliased += w * n * levy_tail_mass(model, max(reach, half_width)) / big_mass
    if aliased > 1e-5:
        warnings.warn(f"convolution mass {aliased:.3g} wraps around the periodic grid",
                      GridAliasingWarning)

    grid_x = h * np.arange(m // 2 + 1)
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    ax = np.abs(pts)
    if np.any(ax > half_width):
        raise DomainError("points exceed the decomposition grid")

    def sample(arr, kind_method, err):
        vals = np.interp(ax, grid_x, arr[:m // 2 + 1])
        return KernelGrid("heat", t, pts, vals, np.full(len(pts), err), kind_method)

    small_mass = float(np.sum(small)) * h
    big_grid_mass = float(np.sum(big)) * h
    total = decay * small_mass + small_mass * big_grid_mass
    noise = 1e-15 * float(np.max(np.abs(recombined)))
    return JumpDecomposition(
        r=float(r), big_mass=big_mass, poisson_terms=int(n_terms),
        small_grid=sample(small, "decomposition", noise),
        big_grid=sample(big, "decomposition", noise),
        recombined=sample(recombined, "decomposition", noise + remainder / h),
        series_remainder=remainder, aliased_mass=aliased, total_mass=total)


def convolution_power_ratio(model, r, n, points, h=0.01, half_width=2000.0):
    """bar nu_r^{*n}(x) / nu(x) on the given points (d = 1)."""
    if model.dim != 1:
        raise DomainError("convolution powers are implemented for d = 1")
    m = _fft_grid(h, half_width)
    _, half_masses = _big_jump_masses(model, r, h, half_width)
    mhat = np.fft.rfft(_periodic_from_half(half_masses, m)).real
    dens = np.fft.irfft(mhat ** n, n=m) / h
    grid_x = h * np.arange(m // 2 + 1)
    ax = np.abs(np.atleast_1d(np.asarray(points, dtype=float)))
    return np.interp(ax, grid_x, dens[:m // 2 + 1]) / model.density(ax)


# -- audits ------------------------------------------------------------------------

def exp_upper_bound_check(model, t, xi0, points, tol=1e-8):
    """Audit p_t(x) <= p_t(0) exp(-<xi0, x> + t omega(xi0)) on the points."""
    xi = np.atleast_1d(np.asarray(xi0, dtype=float))
    s = _norm(xi)
    if model.is_exponential and s > model.kappa * (1 + 1e-14):
        raise DomainError("|xi0| must not exceed kappa")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    proj = pts * xi[0] if pts.ndim == 1 else pts @ xi
    grid = heat_kernel(model, t, pts)
    w = omega(model, xi).value if s > 0 else 0.0
    rhs = heat_kernel_zero(model, t) * np.exp(-proj + t * w)
    excess = grid.values - rhs
    viol = excess > tol + grid.error_estimates
    return BoundAudit(pts, grid.values, rhs, float(max(np.max(excess), 0.0)),
                      int(np.sum(viol)), tol, {"omega": w})


def semigroup_defect(model, t, x_max=20.0, h=0.1, half_width=140.0):
    """sup_{|x| <= x_max} |p_t * p_t - p_2t| / p_2t with a grid (trapezoid) convolution."""
    n = int(round((half_width + x_max) / h))
    xs = h * np.arange(n + 1)
    p = heat_kernel(model, t, xs).values
    full = np.concatenate([p[:0:-1], p])       # symmetric grid -n..n
    k = int(round(x_max / h))
    ys = np.arange(-int(round(half_width / h)), int(round(half_width / h)) + 1)
    out = np.empty(k + 1)
    for i in range(k + 1):
        out[i] = h * np.sum(full[n + i - ys] * full[n + ys])
    target = heat_kernel(model, 2 * t, xs[:k + 1]).values
    return float(np.max(np.abs(out - target) / target))


def _tail_fit_mass(model, xs, vals, x_end):
    """Fitted tail mass int_{x_end}^inf of a radial kernel (d = 1 one side)."""
    sel = (xs >= x_end / 4) & (vals > 0)
    x, v = xs[sel], vals[sel]
    if len(x) < 4:
        return 0.0
    if model.is_exponential:
        A = np.column_stack([np.ones_like(x), -x, np.log(x)])
        c, *_ = np.linalg.lstsq(A, np.log(v), rcond=None)
        g = lambda y: np.exp(c[0] - c[1] * y + c[2] * np.log(y))
        return _quad(g, x_end, np.inf)[0]
    slope = np.polyfit(np.log(x), np.log(v), 1)[0]
    step = -slope - 1.0
    if model.profile.kind == "pure_stable":
        slope, step = -1.0 - model.profile.beta, model.profile.beta
    step = max(step, 0.2)
    powers = slope - step * np.arange(3)
    A = x[:, None] ** powers[None, :]
    c, *_ = np.linalg.lstsq(A, v, rcond=None)
    return float(np.sum(c * x_end ** (powers + 1) / -(powers + 1)))


def kernel_mass(model, kind, param, x_end=None, x_start=1e-10, ratio=1.5, nodes=10):
    """Total mass of p_t (kind="heat") or g_alpha (kind="resolvent") in d = 1.

    Composite Gauss-Legendre on a geometric grid, which also absorbs the
    logarithmic singularity of g_alpha at 0, plus a fitted tail beyond x_end.
    """
    if model.dim != 1:
        raise DomainError("kernel_mass is implemented for d = 1")
    if x_end is None:
        if model.is_exponential:
            rate = model.kappa if kind == "heat" else gamma_alpha(model, param)
            x_end = 60.0 / rate + (10.0 * param if kind == "heat" else 0.0)
        else:
            width = 1.0 / psi_star_inv(model, 1.0 / param) if kind == "heat" else 1.0
            x_end = 400.0 * max(1.0, width)
    edges = np.concatenate([[0.0], np.geomspace(x_start, x_end,
                                                int(math.ceil(math.log(x_end / x_start)
                                                              / math.log(ratio))) + 1)])
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    ws = (half[:, None] * gw[None, :]).ravel()
    if kind == "heat":
        grid = heat_kernel(model, param, xs)
    elif kind == "resolvent":
        grid = resolvent_freq(model, param, xs)
    else:
        raise DomainError("kind must be 'heat' or 'resolvent'")
    body = float(np.sum(ws * grid.values))
    tail = _tail_fit_mass(model, xs, grid.values, x_end)
    err = float(np.sum(ws * grid.error_estimates))
    return 2.0 * (body + tail), 2.0 * err


def l1_certificate(model, ts=None):
    """max over t of p_t(0) (2 pi)^d / Psi*_-(1/t)^d."""
    ts = np.geomspace(1e-3, 1e3, 25) if ts is None else np.asarray(ts, dtype=float)
    d = model.dim
    ratios = [heat_kernel_zero(model, float(t)) * (2 * math.pi) ** d
              / psi_star_inv(model, 1.0 / t) ** d for t in ts]
    return float(max(ratios))
