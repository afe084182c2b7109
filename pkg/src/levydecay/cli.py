"""Command-line front end.

Every subcommand reads a JSON config (``--config``) holding a ``version``, a
``model`` block and the command's own parameters; unknown keys are rejected.
CSV goes to ``--out`` (or stdout) with 17 significant digits.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 unsupported profile.
"""

import argparse
import json
import sys
from importlib import metadata

import jsonschema
import numpy as np
import scipy

from . import decay, kernels, models, moments, profiles, schrodinger
from .errors import (BracketError, CutoffError, DomainError, InsufficientDataError,
                     LevyDecayError, NonIntegrableSymbolError, QuadratureError,
                     UnsupportedProfileError)

CONFIG_VERSION = 1
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_UNSUPPORTED = 0, 2, 3, 4

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NUM_LIST = {"type": "array", "items": _NUM}
_POINTS = {"oneOf": [
    _NUM_LIST,
    {"type": "object", "additionalProperties": False, "required": ["start", "stop", "num"],
     "properties": {"start": _NUM, "stop": _NUM, "num": {"type": "integer", "minimum": 0}}},
]}

_PROFILE = {
    "type": "object", "additionalProperties": False, "required": ["kind"],
    "properties": {
        "kind": {"enum": list(models.KINDS)},
        "beta": _POS, "kappa": _POS, "eta": _POS, "delta": _NUM, "m": _POS,
        "radii": _NUM_LIST, "values": _NUM_LIST,
    },
}
_MODEL = {
    "type": "object", "additionalProperties": False, "required": ["dim", "profile"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "profile": _PROFILE,
        "comparability": {"type": "number", "minimum": 1},
    },
}
_POTENTIAL = {
    "type": "object", "additionalProperties": False, "required": ["kind"],
    "properties": {
        "kind": {"enum": ["square_well", "gaussian_well", "tabulated"]},
        "depth": _POS, "radius": _POS, "width": _POS,
        "grid": _NUM_LIST, "values": _NUM_LIST,
    },
}

_COMMAND_PARAMS = {
    "psi": {"xi": _NUM_LIST, "method": {"enum": ["auto", "quadrature", "closed_form"]}},
    "omega": {"xi": _NUM_LIST, "method": {"enum": ["auto", "quadrature", "closed_form"]}},
    "gamma-sweep": {"alphas": _NUM_LIST},
    "heat": {"t": _POS, "points": _POINTS},
    "resolvent": {"alpha": _POS, "points": _POINTS},
    "kf": {"r": {"oneOf": [_NUM, _NUM_LIST]}, "probes": _NUM_LIST},
    "transition": {"alphas": _NUM_LIST, "points": _POINTS},
    "boundstate": {"potential": _POTENTIAL, "h": _POS, "x_max": _POS},
    "classify": {"probes": _NUM_LIST},
}
_REQUIRED = {
    "psi": ["xi"], "omega": ["xi"], "gamma-sweep": ["alphas"], "heat": ["t", "points"],
    "resolvent": ["alpha", "points"], "kf": ["r"], "transition": ["alphas", "points"],
    "boundstate": ["potential"], "classify": [],
}


class ConfigError(LevyDecayError):
    """Invalid configuration."""


def schema_for(command):
    return {
        "type": "object", "additionalProperties": False,
        "required": ["version", "model"] + _REQUIRED[command],
        "properties": {"version": {"const": CONFIG_VERSION}, "model": _MODEL,
                       **_COMMAND_PARAMS[command]},
    }


def versions():
    try:
        own = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        own = "unknown"
    return {"config": CONFIG_VERSION, "levydecay": own, "numpy": np.__version__,
            "scipy": scipy.__version__}


def load_config(path, command):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(cfg, schema_for(command))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from exc
    return cfg


def build_model(block):
    p = dict(block["profile"])
    kind = p.pop("kind")
    try:
        if kind == "tabulated":
            spec = models.ProfileSpec.tabulated(p["radii"], p["values"])
        else:
            spec = getattr(models.ProfileSpec, kind)(**p)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"profile {kind!r} parameters: {exc}") from exc
    return models.LevyModel(block["dim"], spec, comparability=block.get("comparability", 1.0))


def build_potential(block):
    b = dict(block)
    kind = b.pop("kind")
    try:
        if kind == "square_well":
            return schrodinger.PotentialSpec.square_well(b["depth"], b["radius"])
        if kind == "gaussian_well":
            return schrodinger.PotentialSpec.gaussian_well(b["depth"], b["width"])
        return schrodinger.PotentialSpec.tabulated(b["grid"], b["values"])
    except KeyError as exc:
        raise ConfigError(f"potential {kind!r} is missing {exc}") from exc


def expand_points(spec):
    if isinstance(spec, dict):
        return np.linspace(spec["start"], spec["stop"], spec["num"])
    return np.asarray(spec, dtype=float)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


class _Rows:
    """Accumulates CSV rows so a failure can still leave a partial file."""

    def __init__(self, header):
        self.lines = [",".join(header)]

    def add(self, *values):
        self.lines.append(",".join(_fmt(v) for v in values))

    def text(self):
        return "\n".join(self.lines) + "\n"


class PartialResult(Exception):
    def __init__(self, text, cause):
        super().__init__(str(cause))
        self.text = text
        self.cause = cause


def _rowwise(header, items, compute):
    rows = _Rows(header)
    for item in items:
        try:
            rows.add(*compute(item))
        except LevyDecayError as exc:
            raise PartialResult(rows.text(), exc) from exc
    return rows.text()


def cmd_psi(cfg, args):
    model = build_model(cfg["model"])
    method = cfg.get("method", "auto")

    def row(xi):
        ev = models.psi(model, xi, method=method)
        return xi, ev.value, ev.abs_error_estimate
    return _rowwise(["xi", "psi", "error"], cfg["xi"], row)


def cmd_omega(cfg, args):
    model = build_model(cfg["model"])
    method = cfg.get("method", "auto")

    def row(xi):
        ev = moments.omega(model, xi, method=method)
        return xi, ev.value, ev.abs_error_estimate, ev.diverged
    return _rowwise(["xi", "omega", "error", "diverged"], cfg["xi"], row)


def cmd_gamma_sweep(cfg, args):
    model = build_model(cfg["model"])
    wstar = moments.omega_star(model)
    return _rowwise(["alpha", "gamma", "omega_star"], cfg["alphas"],
                    lambda a: (a, moments.gamma_alpha(model, a), wstar))


def cmd_heat(cfg, args):
    model = build_model(cfg["model"])
    grid = kernels.heat_kernel(model, cfg["t"], expand_points(cfg["points"]),
                               workers=args.threads)
    return grid.to_csv()


def cmd_resolvent(cfg, args):
    model = build_model(cfg["model"])
    pts = expand_points(cfg["points"])
    alpha = cfg["alpha"]
    if args.method == "freq":
        return kernels.resolvent_freq(model, alpha, pts, workers=args.threads).to_csv()
    if args.method == "time":
        return kernels.resolvent_time(model, alpha, pts, workers=args.threads).to_csv()
    f = kernels.resolvent_freq(model, alpha, pts, workers=args.threads)
    t = kernels.resolvent_time(model, alpha, pts, workers=args.threads)
    rows = _Rows(["x", "value_freq", "value_time", "rel_diff", "flags"])
    for i, x in enumerate(pts):
        rel = abs(f.values[i] - t.values[i]) / abs(t.values[i]) if t.values[i] else float("nan")
        flag = ";".join(s for s in (f.flags[i], t.flags[i]) if s)
        rows.add(x, f.values[i], t.values[i], rel, flag)
    return rows.text()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_kf(cfg, args):
    model = build_model(cfg["model"])
    rs = cfg["r"] if isinstance(cfg["r"], list) else [cfg["r"]]
    probes = cfg.get("probes")
    reports = [profiles.kf(model, r, probes).to_dict() for r in rs]
    return _json({"versions": versions(), "reports": reports})


def cmd_transition(cfg, args):
    model = build_model(cfg["model"])
    curve = decay.transition_sweep(model, cfg["alphas"], expand_points(cfg["points"]),
                                   workers=args.threads)
    text = curve.to_csv()
    if any(curve.flags):
        raise PartialResult(text, QuadratureError("some alphas produced flagged fits"))
    return text


def cmd_boundstate(cfg, args):
    model = build_model(cfg["model"])
    V = build_potential(cfg["potential"])
    res = schrodinger.find_bound_state(model, V, h=cfg.get("h", 0.01), x_max=cfg.get("x_max"))
    if isinstance(res, schrodinger.NoBoundState):
        return _json({"bound_state": None, "reason": res.reason, "versions": versions()})
    out = {"bound_state": res.to_dict(), "versions": versions()}
    if args.out:
        with open(args.out + ".phi.csv", "w") as fh:
            fh.write(res.phi_csv())
    return _json(out)


def cmd_classify(cfg, args):
    model = build_model(cfg["model"])
    c = profiles.classify_profile(model.profile, cfg.get("probes"), dim=model.dim)
    return _json({"classification": c.to_dict(), "versions": versions()})


COMMANDS = {
    "psi": cmd_psi, "omega": cmd_omega, "gamma-sweep": cmd_gamma_sweep, "heat": cmd_heat,
    "resolvent": cmd_resolvent, "kf": cmd_kf, "transition": cmd_transition,
    "boundstate": cmd_boundstate, "classify": cmd_classify,
}

_NUMERIC = (QuadratureError, CutoffError, BracketError, NonIntegrableSymbolError,
            InsufficientDataError, ArithmeticError)


def build_parser():
    parser = argparse.ArgumentParser(prog="levydecay",
                                     description="Levy heat/resolvent kernels and decay rates")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        if name == "resolvent":
            p.add_argument("--method", choices=["freq", "time", "both"], default="freq")
    return parser


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config, args.command)
        _emit(COMMANDS[args.command](cfg, args), args.out)
        return EXIT_OK
    except PartialResult as exc:
        if args.out:
            with open(args.out + ".partial", "w") as fh:
                fh.write(exc.text)
        print(f"error: {exc.cause}", file=sys.stderr)
        return EXIT_UNSUPPORTED if isinstance(exc.cause, UnsupportedProfileError) \
            else EXIT_NUMERIC
    except UnsupportedProfileError as exc:
        print(f"unsupported profile: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
