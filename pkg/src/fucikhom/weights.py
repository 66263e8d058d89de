"""1-periodic weights on the unit cell and their eps-rescalings.

Three closed-form families are supported so that the cell mean and the
sup-deviation from the mean are exact:

* ``constant``: r(y) = value
* ``piecewise``: r(y) = values[j] on [breaks[j-1], breaks[j]) with the
  convention breaks[-1] = 0, breaks[len] = 1
* ``trig``: r(y) = offset + amplitude * sin(2 pi frequency y)

The bounds theta_minus/theta_plus are *declared* metadata. They default to
the tight bounds but may be loosened; they are validated by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

KINDS = ("constant", "piecewise", "trig")

# kernel codes, see _kernels.py
KIND_CODE = {"constant": 0, "piecewise": 1, "trig": 2}

_N_SAMPLES = 10_000


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise ConfigError(f"interval needs a < b, got ({self.a}, {self.b})", "interval")

    @property
    def length(self) -> float:
        return self.b - self.a

    def __iter__(self):
        yield self.a
        yield self.b


@dataclass(frozen=True)
class PeriodicWeight:
    kind: str
    theta_minus: float
    theta_plus: float
    value: float = 0.0
    breaks: tuple = ()
    values: tuple = ()
    offset: float = 0.0
    amplitude: float = 0.0
    frequency: int = 1

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value, theta_minus=None, theta_plus=None):
        value = float(value)
        return cls._build(
            "constant",
            value if theta_minus is None else theta_minus,
            value if theta_plus is None else theta_plus,
            value=value,
        )

    @classmethod
    def piecewise(cls, breaks, values, theta_minus=None, theta_plus=None):
        breaks = tuple(float(t) for t in breaks)
        values = tuple(float(v) for v in values)
        if len(values) != len(breaks) + 1:
            raise ConfigError(
                f"piecewise weight needs len(values) == len(breaks) + 1, "
                f"got {len(values)} values for {len(breaks)} breaks",
                "values",
            )
        if any(not 0.0 < t < 1.0 for t in breaks):
            raise ConfigError("piecewise breaks must lie strictly inside (0, 1)", "breaks")
        if any(t1 <= t0 for t0, t1 in zip(breaks, breaks[1:])):
            raise ConfigError("piecewise breaks must be strictly increasing", "breaks")
        return cls._build(
            "piecewise",
            min(values) if theta_minus is None else theta_minus,
            max(values) if theta_plus is None else theta_plus,
            breaks=breaks,
            values=values,
        )

    @classmethod
    def trigonometric(cls, offset, amplitude, frequency=1, theta_minus=None, theta_plus=None):
        offset, amplitude = float(offset), float(amplitude)
        if int(frequency) != frequency or frequency < 1:
            raise ConfigError("trig frequency must be a positive integer", "frequency")
        if amplitude < 0:
            raise ConfigError("trig amplitude must be non-negative", "amplitude")
        if offset - amplitude <= 0:
            raise ConfigError("trig weight must stay positive: offset - amplitude <= 0", "offset")
        return cls._build(
            "trig",
            offset - amplitude if theta_minus is None else theta_minus,
            offset + amplitude if theta_plus is None else theta_plus,
            offset=offset,
            amplitude=amplitude,
            frequency=int(frequency),
        )

    @classmethod
    def _build(cls, kind, theta_minus, theta_plus, **kw):
        w = cls(kind=kind, theta_minus=float(theta_minus), theta_plus=float(theta_plus), **kw)
        w._check_bounds()
        return w

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown weight kind {self.kind!r}", "kind")
        if not self.theta_minus > 0:
            raise ConfigError("theta_minus must be positive", "theta_minus")
        if self.theta_plus < self.theta_minus:
            raise ConfigError("theta_plus must be >= theta_minus", "theta_plus")

    def _check_bounds(self):
        y = np.linspace(0.0, 1.0, _N_SAMPLES, endpoint=False)
        r = self(y)
        slack = 1e-12 * self.theta_plus
        if r.min() < self.theta_minus - slack:
            raise ConfigError(
                f"weight drops to {r.min():g} below declared theta_minus={self.theta_minus:g}",
                "theta_minus",
            )
        if r.max() > self.theta_plus + slack:
            raise ConfigError(
                f"weight reaches {r.max():g} above declared theta_plus={self.theta_plus:g}",
                "theta_plus",
            )

    # -- config round trip --------------------------------------------

    @classmethod
    def from_dict(cls, data, where="weight"):
        if not isinstance(data, dict):
            raise ConfigError(f"{where}: weight definition must be an object", where)
        kind = data.get("kind")
        allowed = {
            "constant": {"value"},
            "piecewise": {"breaks", "values"},
            "trig": {"offset", "amplitude", "frequency"},
        }
        if kind not in allowed:
            raise ConfigError(f"{where}.kind: expected one of {KINDS}, got {kind!r}", f"{where}.kind")
        keys = set(data) - {"kind"}
        extra = keys - allowed[kind] - {"theta_minus", "theta_plus"}
        if extra:
            name = sorted(extra)[0]
            raise ConfigError(f"{where}.{name}: unknown field for {kind} weight", f"{where}.{name}")
        missing = allowed[kind] - keys - ({"frequency"} if kind == "trig" else set())
        if missing:
            name = sorted(missing)[0]
            raise ConfigError(f"{where}.{name}: required field missing", f"{where}.{name}")
        bounds = {k: data[k] for k in ("theta_minus", "theta_plus") if k in data}
        for k, v in bounds.items():
            _require_number(v, f"{where}.{k}")
        try:
            if kind == "constant":
                _require_number(data["value"], f"{where}.value")
                return cls.constant(data["value"], **bounds)
            if kind == "piecewise":
                for key in ("breaks", "values"):
                    if not isinstance(data[key], list):
                        raise ConfigError(f"{where}.{key}: expected a list", f"{where}.{key}")
                    for v in data[key]:
                        _require_number(v, f"{where}.{key}")
                return cls.piecewise(data["breaks"], data["values"], **bounds)
            for key in ("offset", "amplitude", "frequency"):
                if key in data:
                    _require_number(data[key], f"{where}.{key}")
            return cls.trigonometric(
                data["offset"], data["amplitude"], data.get("frequency", 1), **bounds
            )
        except ConfigError as exc:
            if exc.field and exc.field.startswith(where):
                raise
            field_name = f"{where}.{exc.field}" if exc.field else where
            raise ConfigError(f"{field_name}: {exc}", field_name) from None

    def to_dict(self) -> dict:
        if self.kind == "constant":
            d = {"kind": "constant", "value": self.value}
        elif self.kind == "piecewise":
            d = {"kind": "piecewise", "breaks": list(self.breaks), "values": list(self.values)}
        else:
            d = {
                "kind": "trig",
                "offset": self.offset,
                "amplitude": self.amplitude,
                "frequency": self.frequency,
            }
        d["theta_minus"] = self.theta_minus
        d["theta_plus"] = self.theta_plus
        return d

    # -- evaluation ---------------------------------------------------

    def __call__(self, y):
        """Evaluate r(y mod 1); accepts scalars or arrays."""
        scalar = np.isscalar(y)
        y = np.asarray(y, dtype=float)
        frac = y - np.floor(y)
        if self.kind == "constant":
            out = np.full_like(frac, self.value)
        elif self.kind == "piecewise":
            idx = np.searchsorted(np.asarray(self.breaks), frac, side="right")
            out = np.asarray(self.values)[idx]
        else:
            out = self.offset + self.amplitude * np.sin(2.0 * np.pi * self.frequency * frac)
        return float(out) if scalar else out

    def scaled(self, eps, x):
        """r(x / eps)."""
        if not eps > 0:
            raise ValueError(f"eps must be positive, got {eps}")
        return self(np.asarray(x, dtype=float) / eps) if not np.isscalar(x) else self(x / eps)

    @property
    def mean(self) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "piecewise":
            edges = (0.0,) + self.breaks + (1.0,)
            return math.fsum(v * (t1 - t0) for v, t0, t1 in zip(self.values, edges, edges[1:]))
        # integer frequency: the sine integrates to zero over the cell
        return self.offset

    @property
    def sup_deviation(self) -> float:
        if self.kind == "constant":
            return 0.0
        if self.kind == "piecewise":
            m = self.mean
            return max(abs(v - m) for v in self.values)
        return self.amplitude

    @property
    def is_constant(self) -> bool:
        return self.sup_deviation == 0.0

    def homogenized(self) -> "PeriodicWeight":
        """Constant weight equal to the cell mean, keeping the declared bounds."""
        return PeriodicWeight.constant(self.mean, self.theta_minus, self.theta_plus)

    def discontinuities(self, eps, a, b):
        """Jump points of x -> r(x/eps) strictly inside (a, b), sorted."""
        if self.kind != "piecewise":
            return np.empty(0)
        jumps = list(self.breaks)
        if self.values[0] != self.values[-1]:
            jumps.append(0.0)
        jumps = np.asarray(sorted(jumps))
        n0 = math.floor(a / eps) - 1
        n1 = math.ceil(b / eps) + 1
        cells = np.arange(n0, n1 + 1, dtype=float)
        pts = ((cells[:, None] + jumps[None, :]) * eps).ravel()
        pts = pts[(pts > a) & (pts < b)]
        return np.unique(pts)


def _require_number(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{name}: expected a finite number, got {v!r}", name)


def joint_bounds(*weights):
    """(theta_-, theta_+) bounding every weight given."""
    return min(w.theta_minus for w in weights), max(w.theta_plus for w in weights)


def resolve(weight, eps):
    """Weight seen by the solvers: eps=None selects the homogenized constant mean."""
    if eps is None:
        return weight.homogenized(), 1.0
    if not eps > 0:
        raise ValueError(f"eps must be positive or None, got {eps}")
    return weight, float(eps)
