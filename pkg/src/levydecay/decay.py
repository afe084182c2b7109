"""Decay-rate fits, ratio bands and the resolvent transition sweep."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError, UnsupportedProfileError
from .moments import gamma_alpha, omega_star

MIN_POINTS = 8
RESIDUAL_FLAG = 0.05


@dataclass(frozen=True)
class DecayFit:
    rate: float
    power: float
    window: tuple
    rms_residual: float
    n_points: int
    flagged: bool = False

    def to_dict(self):
        return {"rate": self.rate, "power": self.power, "window": list(self.window),
                "rms_residual": self.rms_residual, "n_points": self.n_points,
                "flagged": self.flagged}


@dataclass(frozen=True)
class ComparabilityReport:
    inf_ratio: float
    sup_ratio: float
    band: float
    window: tuple
    n_points: int = 0

    def to_dict(self):
        return {"inf_ratio": self.inf_ratio, "sup_ratio": self.sup_ratio, "band": self.band,
                "window": list(self.window), "n_points": self.n_points}


@dataclass(frozen=True)
class TransitionCurve:
    alphas: tuple
    fitted_rates: tuple
    predicted_rates: tuple
    omega_star: float
    residuals: tuple = ()
    flags: tuple = ()

    def to_csv(self, path=None):
        lines = ["alpha,fitted_rate,predicted_rate,residual"]
        res = self.residuals or (float("nan"),) * len(self.alphas)
        for a, f, p, r in zip(self.alphas, self.fitted_rates, self.predicted_rates, res):
            lines.append(f"{a:.17g},{f:.17g},{p:.17g},{r:.17g}")
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _select(points, values, flags=None, errors=None, window=None, drop_fraction=0.2):
    x = np.asarray(points, dtype=float)
    v = np.asarray(values, dtype=float)
    if x.shape != v.shape:
        raise DomainError("points and values must have the same shape")
    order = np.argsort(x)
    x, v = x[order], v[order]
    keep = np.isfinite(v)
    if flags is not None:
        keep &= np.array([not f for f in np.asarray(flags, dtype=object)[order]])
    if errors is not None:
        e = np.asarray(errors, dtype=float)[order]
        keep &= e <= 0.01 * np.abs(v)
    if window is not None:
        keep &= (x >= window[0]) & (x <= window[1])
    x, v = x[keep], v[keep]
    # the asymptotic fits ignore the nearest fifth of the radii
    skip = int(math.floor(drop_fraction * len(x)))
    x, v = x[skip:], v[skip:]
    if len(x) < MIN_POINTS:
        raise InsufficientDataError(f"need at least {MIN_POINTS} usable points, got {len(x)}")
    if np.any(v <= 0):
        raise DomainError("values must be positive for a logarithmic fit")
    return x, v


def _lstsq(A, y):
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return coef, float(np.sqrt(np.mean(resid ** 2)))


def fit_exponential_rate(points, values, power_correction=True, flags=None, errors=None,
                         window=None):
    """log v = -rate x (+ power log x) + const by least squares."""
    x, v = _select(points, values, flags, errors, window)
    cols = [-x, np.ones_like(x)]
    if power_correction:
        cols.insert(1, np.log(x))
    coef, rms = _lstsq(np.column_stack(cols), np.log(v))
    power = float(coef[1]) if power_correction else 0.0
    return DecayFit(float(coef[0]), power, (float(x[0]), float(x[-1])), rms, len(x),
                    rms > RESIDUAL_FLAG)


def fit_powerlaw(points, values, flags=None, errors=None, window=None):
    """log v = power log x + const; rate is 0."""
    x, v = _select(points, values, flags, errors, window)
    coef, rms = _lstsq(np.column_stack([np.log(x), np.ones_like(x)]), np.log(v))
    return DecayFit(0.0, float(coef[0]), (float(x[0]), float(x[-1])), rms, len(x),
                    rms > RESIDUAL_FLAG)


def default_window(points, flags=None, support=0.0):
    """[max(5, 2 support), last unflagged point]."""
    x = np.asarray(points, dtype=float)
    ok = np.ones(len(x), bool) if flags is None else np.array([not f for f in flags])
    return (max(5.0, 2.0 * support), float(np.max(x[ok])))


def ratio_report(values_num, values_den, window=None, points=None, flags=None):
    """inf/sup of num/den over the (unflagged) window points."""
    num = np.asarray(values_num, dtype=float)
    den = np.asarray(values_den, dtype=float)
    if num.shape != den.shape:
        raise DomainError("grids must be aligned")
    keep = np.isfinite(num) & np.isfinite(den) & (num > 0)
    if np.any(den[keep] <= 0):
        raise DomainError("denominator must be positive")
    if flags is not None:
        keep &= np.array([not f for f in flags])
    if window is not None:
        if points is None:
            raise DomainError("a window needs the points")
        x = np.abs(np.asarray(points, dtype=float))
        keep &= (x >= window[0]) & (x <= window[1])
    if not np.any(keep):
        raise InsufficientDataError("empty ratio window")
    ratio = num[keep] / den[keep]
    lo, hi = float(ratio.min()), float(ratio.max())
    if window is None and points is not None:
        x = np.abs(np.asarray(points, dtype=float))[keep]
        window = (float(x.min()), float(x.max()))
    return ComparabilityReport(lo, hi, hi / lo, tuple(window) if window else (), int(keep.sum()))


def transition_sweep(model, alphas, points, power_correction=True, workers=1):
    """Fitted resolvent tail rates against gamma_alpha over an alpha sweep."""
    from .kernels import resolvent_freq
    if not model.is_exponential:
        raise UnsupportedProfileError("transition sweeps need an exponential-type profile")
    alphas = sorted(float(a) for a in alphas)
    fitted, predicted, residuals, flags = [], [], [], []
    for a in alphas:
        grid = resolvent_freq(model, a, points, workers=workers)
        try:
            fit = fit_exponential_rate(grid.points, grid.values, power_correction,
                                       flags=grid.flags, errors=grid.error_estimates)
            fitted.append(fit.rate)
            residuals.append(fit.rms_residual)
            flags.append("residual" if fit.flagged else "")
        except (InsufficientDataError, DomainError) as exc:
            fitted.append(float("nan"))
            residuals.append(float("nan"))
            flags.append(type(exc).__name__)
        predicted.append(gamma_alpha(model, a))
    return TransitionCurve(tuple(alphas), tuple(fitted), tuple(predicted),
                           omega_star(model), tuple(residuals), tuple(flags))
