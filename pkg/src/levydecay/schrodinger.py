"""Bound states of H = -L + V through the resolvent fixed-point equation.

-alpha is an eigenvalue of H with eigenfunction phi iff
phi = g_alpha * (|V| phi), i.e. the kernel operator K_alpha has eigenvalue 1.
K_alpha is discretised by product integration on the cells of a uniform grid
(cell averages of g_alpha, which absorb its singularity at 0); its largest
eigenvalue mu(alpha) decreases strictly in alpha and the ground state sits at
mu(alpha) = 1.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate, optimize

from .decay import DecayFit, fit_exponential_rate, fit_powerlaw, ratio_report
from .errors import DomainError, InsufficientDataError
from .kernels import _resolvent_point, psi_fast
from .models import psi_star_inv
from .moments import gamma_alpha
from .quadrature import oscillatory_integral

_GL4 = np.polynomial.legendre.leggauss(4)
_GL6 = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    depth: float = 0.0
    radius: float = 0.0
    width: float = 0.0
    grid: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind == "square_well":
            if self.depth <= 0 or self.radius <= 0:
                raise DomainError("square well needs depth > 0 and radius > 0")
        elif self.kind == "gaussian_well":
            if self.depth <= 0 or self.width <= 0:
                raise DomainError("gaussian well needs depth > 0 and width > 0")
        elif self.kind == "tabulated":
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if g.ndim != 1 or g.shape != v.shape or len(g) < 2 or np.any(np.diff(g) <= 0):
                raise DomainError("tabulated potential needs an ascending grid and matching values")
            if np.any(v > 0):
                raise DomainError("potential values must be <= 0")
            if v[0] != 0 or v[-1] != 0:
                raise DomainError("tabulated potential must vanish at the ends of its grid")
        else:
            raise DomainError(f"unknown potential kind {self.kind!r}")

    @classmethod
    def square_well(cls, depth, radius):
        return cls("square_well", depth=float(depth), radius=float(radius))

    @classmethod
    def gaussian_well(cls, depth, width):
        return cls("gaussian_well", depth=float(depth), width=float(width))

    @classmethod
    def tabulated(cls, grid, values):
        return cls("tabulated", grid=tuple(float(x) for x in grid),
                   values=tuple(float(v) for v in values))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "square_well":
            return np.where(np.abs(x) < self.radius, -self.depth, 0.0)
        if self.kind == "gaussian_well":
            return -self.depth * np.exp(-0.5 * (x / self.width) ** 2)
        return np.interp(x, self.grid, self.values, left=0.0, right=0.0)

    @property
    def support_radius(self):
        if self.kind == "square_well":
            return self.radius
        if self.kind == "gaussian_well":
            # |V| < 1e-12 depth beyond this radius
            return self.width * math.sqrt(2 * math.log(1e12))
        g = np.asarray(self.grid)
        nz = np.flatnonzero(np.asarray(self.values) != 0)
        if len(nz) == 0:
            return 0.0
        return float(max(abs(g[max(nz[0] - 1, 0)]), abs(g[min(nz[-1] + 1, len(g) - 1)])))

    def scaled(self, factor):
        if self.kind == "tabulated":
            return PotentialSpec.tabulated(self.grid, [factor * v for v in self.values])
        return PotentialSpec(self.kind, self.depth * factor, self.radius, self.width)

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "square_well":
            out.update(depth=self.depth, radius=self.radius)
        elif self.kind == "gaussian_well":
            out.update(depth=self.depth, width=self.width)
        else:
            out.update(grid=list(self.grid), values=list(self.values))
        return out


@dataclass(frozen=True)
class BirmanSchwingerCurve:
    alphas: tuple
    mus: tuple


@dataclass(frozen=True)
class BSEigenpair:
    mu: float
    phi: np.ndarray
    converged: bool
    iterations: int

    def __iter__(self):
        return iter((self.mu, self.phi))


@dataclass(frozen=True)
class BoundStateResult:
    lambda_: float
    mu_residual: float
    points: np.ndarray
    phi: np.ndarray
    tail_fit: DecayFit
    predicted_rate: float
    curve: BirmanSchwingerCurve
    grid_spacing: float
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        return {"lambda": self.lambda_, "mu_residual": self.mu_residual,
                "tail_fit": self.tail_fit.to_dict() if self.tail_fit else None,
                "predicted_rate": self.predicted_rate,
                "grid": {"h": self.grid_spacing, "n": len(self.points),
                         "x_min": float(self.points[0]), "x_max": float(self.points[-1])},
                "curve": {"alphas": list(self.curve.alphas), "mus": list(self.curve.mus)}}

    def phi_csv(self):
        lines = ["x,phi"] + [f"{x:.17g},{v:.17g}" for x, v in zip(self.points, self.phi)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class NoBoundState:
    reason: str
    curve: BirmanSchwingerCurve

    def to_dict(self):
        return {"bound_state": None, "reason": self.reason}


def uniform_grid(h, x_max, align=0.0):
    """Cell centres (j + 1/2) h covering [-x_max, x_max]; x_max and align are snapped to h."""
    n = int(round(x_max / h))
    return h * (np.arange(-n, n) + 0.5)


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise DomainError("grid must be a 1-D array of cell centres")
    h = float(grid[1] - grid[0])
    if h <= 0 or np.max(np.abs(np.diff(grid) - h)) > 1e-9 * h:
        raise DomainError("grid must be uniform and ascending")
    return grid, h


@functools.lru_cache(maxsize=4096)
def _cell_average_zero(model, alpha, h):
    """(2/h) int_0^{h/2} g_alpha = (1/pi) int sinc(xi h/2) / (alpha + Psi(xi)) d xi."""
    def g(u):
        z = 0.5 * h * u
        return np.sinc(z / math.pi) / (alpha + psi_fast(model, u))
    v, _ = oscillatory_integral(g, 2 * math.pi / h, scales=(psi_star_inv(model, alpha), 1.0))
    return v / math.pi


def _cell_average(model, alpha, h, k):
    """(1/h) int over [(k - 1/2) h, (k + 1/2) h] of g_alpha for k >= 1."""
    if k <= 3:
        x, w = _GL6
        subs = [((k - 0.5) * h, k * h), (k * h, (k + 0.5) * h)]
    else:
        x, w = _GL4
        subs = [((k - 0.5) * h, (k + 0.5) * h)]
    total = 0.0
    for a, b in subs:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        for xi, wi in zip(x, w):
            total += half * wi * _resolvent_point(model, alpha, float(mid + half * xi))[0]
    return total / h


def _toeplitz_averages(model, alpha, h, n):
    avg = np.empty(n)
    avg[0] = _cell_average_zero(model, alpha, h)
    for k in range(1, n):
        avg[k] = _cell_average(model, alpha, h, k)
    return avg


def _support_nodes(V, grid):
    w = np.abs(V(grid))
    idx = np.flatnonzero(w > 0)
    return idx, w[idx]


def _symmetric_matrix(model, alpha, h, idx, w):
    """D^{1/2} G D^{1/2} with G_ij = h * cellavg(g)(i - j), D = diag(|V_j|)."""
    offsets = idx[:, None] - idx[None, :]
    avg = _toeplitz_averages(model, alpha, h, int(np.max(np.abs(offsets))) + 1)
    G = h * avg[np.abs(offsets)]
    sq = np.sqrt(w)
    return sq[:, None] * G * sq[None, :], G


def _power_iteration(S, tol=1e-10, max_iter=100000):
    v = np.ones(S.shape[0]) / math.sqrt(S.shape[0])
    mu = 0.0
    for it in range(1, max_iter + 1):
        y = S @ v
        new = float(v @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0, v, True, it
        v = y / norm
        if abs(new - mu) <= tol * abs(new):
            return new, v, True, it
        mu = new
    return mu, v, False, max_iter


def bs_eigenvalue(model, V, alpha, grid, tol=1e-10, max_iter=100000):
    """Largest eigenvalue mu(alpha) of phi -> g_alpha * (|V| phi) and its Perron vector.

    ``phi`` is returned on the support nodes of V inside ``grid`` (zero elsewhere).
    """
    if model.dim != 1:
        raise DomainError("the bound-state solver is implemented for d = 1")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    grid, h = _check_grid(grid)
    idx, w = _support_nodes(V, grid)
    phi = np.zeros(len(grid))
    if len(idx) == 0:
        return BSEigenpair(0.0, phi, True, 0)
    S, G = _symmetric_matrix(model, float(alpha), h, idx, w)
    mu, v, ok, it = _power_iteration(S, tol, max_iter)
    # phi = G D^{1/2} v / mu, the Perron vector of G D
    inner = G @ (np.sqrt(w) * v) / mu
    inner *= np.sign(np.sum(inner)) or 1.0
    phi[idx] = inner
    return BSEigenpair(mu, phi, ok, it)


def dense_mu(model, V, alpha, grid):
    """Largest eigenvalue of the same discrete operator by a dense symmetric solve."""
    grid, h = _check_grid(grid)
    idx, w = _support_nodes(V, grid)
    if len(idx) == 0:
        return 0.0
    S, _ = _symmetric_matrix(model, float(alpha), h, idx, w)
    return float(np.linalg.eigvalsh(S)[-1])


def _exterior_kernel(model, alpha, u_max, h):
    """Spline of log g_alpha on [h/4, u_max] (tilted evaluation keeps tail accuracy)."""
    u = np.unique(np.concatenate([np.geomspace(h / 4, 1.0, 40),
                                  np.linspace(1.0, u_max, max(8, int(4 * u_max)))]))
    vals = np.array([_resolvent_point(model, alpha, float(x))[0] for x in u])
    ok = vals > 0
    spline = interpolate.CubicSpline(np.log(u[ok]), np.log(vals[ok]))
    return lambda x: np.exp(spline(np.log(x)))


def _extend(model, alpha, grid, h, idx, w, phi_support):
    """phi(x) = sum_j int_cell_j g(x - z) dz |V_j| phi_j outside the support."""
    out_idx = np.setdiff1d(np.arange(len(grid)), idx)
    if len(out_idx) == 0:
        return np.zeros(0), out_idx
    zs = grid[idx]
    u_max = float(np.max(np.abs(grid[out_idx][:, None] - zs[None, :]))) + h
    g = _exterior_kernel(model, alpha, u_max, h)
    x, wq = _GL4
    vals = np.zeros(len(out_idx))
    src = w * phi_support
    for q in range(4):
        shift = 0.5 * h * x[q]
        dist = np.abs(grid[out_idx][:, None] - (zs[None, :] + shift))
        vals += 0.5 * h * wq[q] * (g(dist) @ src)
    return vals, out_idx


def find_bound_state(model, V, grid=None, h=0.01, x_max=None, alpha_min=1e-6,
                     mu_tol=1e-8):
    """Ground state: solve mu(alpha) = 1, then extend and fit the eigenfunction tail."""
    if model.dim != 1:
        raise DomainError("the bound-state solver is implemented for d = 1")
    a = V.support_radius
    if grid is None:
        if x_max is None:
            x_max = _default_extent(model, a)
        grid = uniform_grid(h, x_max)
    grid, h = _check_grid(grid)
    idx, w = _support_nodes(V, grid)
    alphas, mus = [], []

    def mu_of(alpha):
        m = bs_eigenvalue(model, V, alpha, grid).mu
        alphas.append(alpha)
        mus.append(m)
        return m

    def curve():
        order = np.argsort(alphas)
        return BirmanSchwingerCurve(tuple(float(alphas[i]) for i in order),
                                    tuple(float(mus[i]) for i in order))

    if len(idx) == 0:
        return NoBoundState("potential vanishes on the grid", curve())
    hi = 1.0
    while mu_of(hi) > 1.0:
        hi *= 2.0
        if hi > 1e8:
            raise DomainError("mu(alpha) does not fall below 1")
    lo = hi / 2.0
    while mu_of(lo) <= 1.0:
        hi = lo
        lo /= 2.0
        if lo < alpha_min:
            return NoBoundState(f"mu(alpha) < 1 down to alpha = {alpha_min}", curve())
    f = lambda la: math.log(mu_of(math.exp(la)))
    la = optimize.brentq(f, math.log(lo), math.log(hi), xtol=1e-13, rtol=1e-14)
    alpha = math.exp(la)
    pair = bs_eigenvalue(model, V, alpha, grid)
    residual = abs(pair.mu - 1.0)

    phi = pair.phi.copy()
    ext, out_idx = _extend(model, alpha, grid, h, idx, w, phi[idx])
    phi[out_idx] = ext / pair.mu
    phi /= math.sqrt(h * np.sum(phi ** 2))

    predicted = gamma_alpha(model, alpha) if model.is_exponential else float("nan")
    tail = grid >= max(5.0, 2.0 * a)
    try:
        if model.is_exponential:
            fit = fit_exponential_rate(grid[tail], phi[tail], power_correction=True)
        else:
            fit = fit_powerlaw(grid[tail], phi[tail])
    except (InsufficientDataError, DomainError):
        fit = None
    return BoundStateResult(-alpha, residual, grid, phi, fit, predicted, curve(), h,
                            {"support_radius": a})


def _default_extent(model, a):
    if model.is_exponential:
        # the predicted tail has decayed by 1e-12 from the well edge
        return float(math.ceil(a + 12 * math.log(10) / (0.5 * model.kappa)))
    return float(max(60.0, 10 * a))


def ground_state_profile_report(result, model, window=(5.0, 40.0), min_points=20):
    """inf/sup of phi_0 / f over the tail window (subexponential comparability)."""
    x = result.points
    sel = (np.abs(x) >= window[0]) & (np.abs(x) <= window[1]) & (result.phi > 0)
    if np.sum(sel) < min_points:
        raise InsufficientDataError(f"fewer than {min_points} tail points in the window")
    f = model.profile_value(np.abs(x[sel]))
    return ratio_report(result.phi[sel], f, window=window, points=x[sel])
