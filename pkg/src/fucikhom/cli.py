"""Command-line front end.

Usage::

    fucikhom COMMAND --config CONFIG.json [--out DIR] [--jobs N] [--tol X] [--seed N]

COMMAND is one of ``eig``, ``curve``, ``sweep-eig``, ``sweep-fucik``,
``constants``. The config is a single JSON object; global flags override the
matching config fields (flag > config > default). Unknown fields are
rejected.

Config fields (all commands): ``command`` (optional, must match COMMAND),
``p`` (required), ``interval`` ([a, b], default
[0, 1]), ``tol``, ``steps``, ``jobs``, ``out``, ``seed``.

Per command:

* ``eig``: ``weight``, ``eps`` (number or null for the homogenized weight),
  ``method`` ("shooting" | "rayleigh" | "both"), ``grid_n``
* ``curve``: ``m``, ``n``, ``eps``, ``k``, ``sign`` ("+" | "-"), and either
  ``s`` (list of ascending slopes) or ``s_grid``
  ({"start", "stop", "num", "spacing": "log" | "linear"})
* ``sweep-eig``: ``weight``, ``eps_grid``
* ``sweep-fucik``: ``m``, ``n``, ``k``, ``sign``, ``s``, ``eps_grid``
* ``constants``: ``m``, ``n``, ``N`` (default 1), ``mu2`` (required if N > 1)

Weight specs::

    {"kind": "constant", "value": 2}
    {"kind": "piecewise", "breaks": [0.5], "values": [1, 3]}
    {"kind": "trig", "offset": 2, "amplitude": 1, "frequency": 1}

each optionally with ``theta_minus`` / ``theta_plus`` declared bounds.

Outputs go to ``<out>/report.json``, ``<out>/report.csv`` and
``<out>/plot.gp``; without ``--out`` the JSON report is printed to stdout.

Exit codes: 0 success, 2 config error, 3 solver error, 4 bound violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BoundViolation, ConfigError, SolverError
from .fucik1d import S_MAX, S_MIN, SIGNS, trace_curve
from .homrates import rate_constants, sweep_eigen, sweep_fucik
from .plap1d import DEFAULT_STEPS, DEFAULT_TOL, lambda1_rayleigh, lambda1_shoot
from .reports import (
    curve_plot_script,
    curve_to_csv,
    dumps,
    eig_report_to_csv,
    estimate_to_dict,
    fucik_reports_to_csv,
    point_to_dict,
    record_to_dict,
    report_to_dict,
    sweep_plot_script,
)
from .weights import Interval, PeriodicWeight

COMMANDS = ("eig", "curve", "sweep-eig", "sweep-fucik", "constants")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_BOUND = 0, 2, 3, 4

_COMMON = {"command", "p", "interval", "tol", "steps", "jobs", "out", "seed"}
_FIELDS = {
    "eig": {"weight", "eps", "method", "grid_n"},
    "curve": {"m", "n", "eps", "k", "sign", "s", "s_grid"},
    "sweep-eig": {"weight", "eps_grid"},
    "sweep-fucik": {"m", "n", "k", "sign", "s", "eps_grid"},
    "constants": {"m", "n", "N", "mu2"},
}


@dataclass
class ExperimentConfig:
    command: str
    p: float | None = None
    interval: Interval = field(default_factory=lambda: Interval(0.0, 1.0))
    tol: float = DEFAULT_TOL
    steps: int = DEFAULT_STEPS
    jobs: int = 1
    out: str | None = None
    seed: int | None = None
    weight: PeriodicWeight | None = None
    m: PeriodicWeight | None = None
    n: PeriodicWeight | None = None
    eps: float | None = None
    method: str = "shooting"
    grid_n: int = 2048
    k: int = 1
    sign: str = "+"
    s: float | list | None = None
    eps_grid: list | None = None
    N: int = 1
    mu2: float | None = None
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, command, d):
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}", "command")
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object", "config")
        allowed = _COMMON | _FIELDS[command]
        for key in d:
            if key not in allowed:
                raise ConfigError(f"{key}: unknown field for command {command!r}", key)
        if d.get("command", command) != command:
            raise ConfigError(
                f"command: config says {d['command']!r} but {command!r} was requested", "command"
            )
        cfg = cls(command=command, raw=dict(d))

        cfg.p = _number(d, "p", required=True)
        if not cfg.p > 1:
            raise ConfigError("p: must exceed 1", "p")
        if "interval" in d:
            iv = d["interval"]
            if not (isinstance(iv, list) and len(iv) == 2):
                raise ConfigError("interval: expected [a, b]", "interval")
            _number({"interval": iv[0]}, "interval")
            _number({"interval": iv[1]}, "interval")
            try:
                cfg.interval = Interval(float(iv[0]), float(iv[1]))
            except ConfigError as exc:
                raise ConfigError(str(exc), "interval") from None
        if "tol" in d:
            cfg.tol = _positive(d, "tol")
        if "steps" in d:
            cfg.steps = _integer(d, "steps", minimum=16)
        if "jobs" in d:
            cfg.jobs = _integer(d, "jobs", minimum=1)
        if "out" in d:
            if not isinstance(d["out"], str):
                raise ConfigError("out: expected a path string", "out")
            cfg.out = d["out"]
        if "seed" in d:
            cfg.seed = _integer(d, "seed", minimum=0)

        needs_weight = command in ("eig", "sweep-eig")
        if needs_weight:
            cfg.weight = _weight(d, "weight")
        else:
            cfg.m = _weight(d, "m")
            cfg.n = _weight(d, "n")

        if command in ("eig", "curve"):
            if d.get("eps") is not None:
                cfg.eps = _positive(d, "eps")
        if command == "eig":
            cfg.method = d.get("method", "shooting")
            if cfg.method not in ("shooting", "rayleigh", "both"):
                raise ConfigError("method: expected 'shooting', 'rayleigh' or 'both'", "method")
            if "grid_n" in d:
                cfg.grid_n = _integer(d, "grid_n", minimum=16)
        if command in ("curve", "sweep-fucik"):
            cfg.k = _integer(d, "k", minimum=0, required=True)
            cfg.sign = d.get("sign", "+")
            if cfg.sign not in SIGNS:
                raise ConfigError("sign: expected '+' or '-'", "sign")
        if command == "curve":
            cfg.s = _s_values(d)
        if command == "sweep-fucik":
            if cfg.k < 1:
                raise ConfigError("k: sweep-fucik needs k >= 1", "k")
            cfg.s = _slope(_number(d, "s", required=True), "s")
        if command in ("sweep-eig", "sweep-fucik"):
            grid = d.get("eps_grid")
            if not isinstance(grid, list) or not grid:
                raise ConfigError("eps_grid: expected a non-empty list of positive numbers", "eps_grid")
            cfg.eps_grid = [_positive({"eps_grid": e}, "eps_grid") for e in grid]
        if command == "constants":
            cfg.N = _integer(d, "N", minimum=1) if "N" in d else 1
            if "mu2" in d:
                cfg.mu2 = _positive(d, "mu2")
            elif cfg.N > 1:
                raise ConfigError("mu2: required when N > 1", "mu2")
        return cfg

    def override(self, args):
        if args.out is not None:
            self.out = args.out
        if args.jobs is not None:
            if args.jobs < 1:
                raise ConfigError("--jobs: must be >= 1", "jobs")
            self.jobs = args.jobs
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol: must be positive", "tol")
            self.tol = args.tol
        if args.seed is not None:
            self.seed = args.seed
        return self

    def echo(self) -> dict:
        """Normalized config recorded in every report."""
        out = {"command": self.command, "version": __version__}
        out["p"] = float(self.p)
        out["interval"] = [self.interval.a, self.interval.b]
        out["tol"] = self.tol
        out["steps"] = self.steps
        out["seed"] = self.seed
        return out


def _number(d, key, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"{key}: required field missing", key)
        return None
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{key}: expected a finite number, got {v!r}", key)
    return v


def _positive(d, key):
    v = _number(d, key, required=True)
    if not v > 0:
        raise ConfigError(f"{key}: must be positive, got {v!r}", key)
    return float(v)


def _integer(d, key, minimum=None, required=False):
    v = _number(d, key, required=required)
    if v is None:
        return None
    if int(v) != v:
        raise ConfigError(f"{key}: expected an integer, got {v!r}", key)
    if minimum is not None and v < minimum:
        raise ConfigError(f"{key}: must be >= {minimum}, got {v!r}", key)
    return int(v)


def _slope(v, key):
    if not S_MIN <= v <= S_MAX:
        raise ConfigError(f"{key}: slope {v!r} outside [{S_MIN}, {S_MAX}]", key)
    return float(v)


def _weight(d, key):
    if key not in d:
        raise ConfigError(f"{key}: required weight definition missing", key)
    return PeriodicWeight.from_dict(d[key], where=key)


def _s_values(d):
    if ("s" in d) == ("s_grid" in d):
        raise ConfigError("s: give exactly one of 's' (list) or 's_grid'", "s")
    if "s" in d:
        vals = d["s"]
        if not isinstance(vals, list):
            vals = [vals]
        out = [_slope(_number({"s": v}, "s", required=True), "s") for v in vals]
    else:
        g = d["s_grid"]
        if not isinstance(g, dict):
            raise ConfigError("s_grid: expected an object", "s_grid")
        extra = set(g) - {"start", "stop", "num", "spacing"}
        if extra:
            name = sorted(extra)[0]
            raise ConfigError(f"s_grid.{name}: unknown field", f"s_grid.{name}")
        start = _slope(_positive(g, "start"), "s_grid.start")
        stop = _slope(_positive(g, "stop"), "s_grid.stop")
        num = _integer(g, "num", minimum=1, required=True)
        spacing = g.get("spacing", "log")
        if spacing not in ("log", "linear"):
            raise ConfigError("s_grid.spacing: expected 'log' or 'linear'", "s_grid.spacing")
        space = np.geomspace if spacing == "log" else np.linspace
        out = [float(v) for v in space(start, stop, num)]
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigError("s: values must be strictly ascending", "s")
    return out


# -- commands -------------------------------------------------------------------


def _emit(cfg, payload, csv_text=None, plot_text=None):
    text = dumps(payload) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
        return
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(text)
    if csv_text is not None:
        (out / "report.csv").write_text(csv_text)
    if plot_text is not None:
        (out / "plot.gp").write_text(plot_text)


def cmd_eig(cfg) -> int:
    estimates = []
    if cfg.method in ("shooting", "both"):
        estimates.append(lambda1_shoot(cfg.weight, cfg.eps, cfg.interval, cfg.p, cfg.tol, cfg.steps))
    if cfg.method in ("rayleigh", "both"):
        estimates.append(lambda1_rayleigh(cfg.weight, cfg.eps, cfg.interval, cfg.p, cfg.grid_n))
    payload = dict(cfg.echo())
    payload["weight"] = cfg.weight.to_dict()
    payload["eps"] = cfg.eps
    payload["estimates"] = [estimate_to_dict(e) for e in estimates]
    if len(estimates) == 2:
        a, b = estimates[0].lam, estimates[1].lam
        payload["relative_difference"] = abs(a - b) / abs(b)
    _emit(cfg, payload)
    return EXIT_OK


def cmd_curve(cfg) -> int:
    points = trace_curve(
        cfg.k, cfg.sign, cfg.s, cfg.m, cfg.n, cfg.eps, cfg.interval, cfg.p,
        steps=cfg.steps, jobs=cfg.jobs,
    )
    meta = dict(cfg.echo())
    meta.update({"m": cfg.m.to_dict(), "n": cfg.n.to_dict(), "eps": cfg.eps})
    payload = dict(meta)
    payload["points"] = [point_to_dict(pt) for pt in points]
    _emit(
        cfg, payload, curve_to_csv(points, meta),
        curve_plot_script("report.csv", cfg.k, cfg.sign),
    )
    return EXIT_OK


def _report_violation(reports):
    for rep in reports:
        for rec in rep.records:
            if rec.ratio > 1.0:
                msg = {"error": "bound_violation", "quantity": rep.quantity, "record": record_to_dict(rec)}
                sys.stderr.write(dumps(msg, indent=0).replace("\n", " ") + "\n")
                return EXIT_BOUND
    return EXIT_OK


def _with_warnings(fn):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fn()
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    return result


def cmd_sweep(cfg) -> int:
    if cfg.command == "sweep-eig":
        rep = _with_warnings(lambda: sweep_eigen(
            cfg.weight, cfg.interval, cfg.p, cfg.eps_grid, cfg.tol, cfg.steps, cfg.jobs, strict=False
        ))
        rep.metadata["config"] = cfg.echo()
        reports = [rep]
        payload = report_to_dict(rep)
        csv_text = eig_report_to_csv(rep)
    else:
        alpha, beta = _with_warnings(lambda: sweep_fucik(
            cfg.k, cfg.sign, cfg.s, cfg.m, cfg.n, cfg.interval, cfg.p, cfg.eps_grid,
            cfg.tol, cfg.steps, cfg.jobs, strict=False,
        ))
        for rep in (alpha, beta):
            rep.metadata["config"] = cfg.echo()
        reports = [alpha, beta]
        payload = {"alpha": report_to_dict(alpha), "beta": report_to_dict(beta)}
        csv_text = fucik_reports_to_csv(alpha, beta)
    _emit(cfg, payload, csv_text, sweep_plot_script("report.csv", cfg.command))
    return _report_violation(reports)


def cmd_constants(cfg) -> int:
    rc = rate_constants(cfg.m, cfg.n, cfg.p, cfg.interval if cfg.N == 1 else None, cfg.N, cfg.mu2)
    payload = dict(cfg.echo())
    payload.update({
        "N": rc.N,
        "theta_minus": rc.theta_minus,
        "theta_plus": rc.theta_plus,
        "C_m": rc.C_m,
        "C_n": rc.C_n,
        "C_curve": rc.C_curve,
        "mu2": rc.mu2,
    })
    _emit(cfg, payload)
    return EXIT_OK


DISPATCH = {
    "eig": cmd_eig,
    "curve": cmd_curve,
    "sweep-eig": cmd_sweep,
    "sweep-fucik": cmd_sweep,
    "constants": cmd_constants,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fucikhom",
        description="Fucik eigencurves of the weighted 1D p-Laplacian and their homogenization rates.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file ('-' for stdin)")
    parser.add_argument("--out", help="output directory for report.json/report.csv/plot.gp")
    parser.add_argument("--jobs", type=int, help="concurrent evaluations")
    parser.add_argument("--tol", type=float, help="solver tolerance")
    parser.add_argument("--seed", type=int, help="seed for randomized corpora (recorded only)")
    return parser


def _error(kind, exc, **extra):
    msg = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    msg.update(extra)
    sys.stderr.write(json.dumps(msg) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config == "-":
            raw = json.load(sys.stdin)
        else:
            with open(args.config) as fh:
                raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _error("config", exc, field="config")
        return EXIT_CONFIG
    try:
        cfg = ExperimentConfig.from_dict(args.command, raw).override(args)
    except ConfigError as exc:
        _error("config", exc, field=exc.field)
        return EXIT_CONFIG
    try:
        return DISPATCH[args.command](cfg)
    except BoundViolation as exc:
        _error("bound_violation", exc)
        return EXIT_BOUND
    except (SolverError, ValueError) as exc:
        _error("solver", exc)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
