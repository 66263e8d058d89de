"""Points on the 1D Fucik eigencurves through optimal partitions.

For a ray of slope s and k interior zeros the curve point is
(alpha, beta) = (c/s, c) with

    c = inf over a = t_0 < ... < t_{k+1} = b of
        max_i  (s * lambda_1(m, I_i)  on positive intervals,
                    lambda_1(n, I_i)  on negative intervals),

signs alternating and the first interval positive for ``sign="+"``,
negative for ``sign="-"``.

The infimum is found by bisection on the level c. A level is feasible iff
the earliest-finish greedy sweep fits k+1 intervals into (a, b): since
lambda_1 decreases strictly with the interval, the shortest interval
starting at t whose weighted eigenvalue is at most the level ends at the
first zero of the shooting solution started at t with lambda = level/factor.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import ExceedsDomain, InfeasibleBracket, MonotonicityViolation, SandwichViolation
from .plap1d import DEFAULT_STEPS, check_sandwich, lambda1_shoot, mu_k, pi_p, shoot
from .weights import Interval, joint_bounds

PLUS = "+"
MINUS = "-"
SIGNS = (PLUS, MINUS)

S_MIN, S_MAX = 1e-3, 1e3
DEFAULT_LEVEL_TOL = 1e-10


@dataclass(frozen=True)
class Partition:
    breakpoints: tuple
    sign_start: str = PLUS

    def __post_init__(self):
        if self.sign_start not in SIGNS:
            raise ValueError(f"sign must be '+' or '-', got {self.sign_start!r}")
        t = self.breakpoints
        if len(t) < 2 or any(t1 <= t0 for t0, t1 in zip(t, t[1:])):
            raise ValueError("partition breakpoints must be strictly increasing")

    @property
    def intervals(self):
        t = self.breakpoints
        return [Interval(t0, t1) for t0, t1 in zip(t, t[1:])]

    def sign_of(self, i: int) -> str:
        """Sign carried by the i-th interval, 1-based."""
        flip = (i - 1) % 2 == 1
        if self.sign_start == PLUS:
            return MINUS if flip else PLUS
        return PLUS if flip else MINUS

    def positive(self):
        return [iv for i, iv in enumerate(self.intervals, 1) if self.sign_of(i) == PLUS]

    def negative(self):
        return [iv for i, iv in enumerate(self.intervals, 1) if self.sign_of(i) == MINUS]


@dataclass(frozen=True)
class CurvePoint:
    k: int
    sign: str
    s: float
    c: float
    alpha: float
    beta: float
    partition: Partition
    # the optimal-partition characterization is established for p >= 2
    outside_stated_validity: bool = False


def gamma(s: float) -> float:
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    return 1.0 if s >= 1.0 else 1.0 / s


def _check_args(k, sign, s, p):
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a non-negative integer, got {k}")
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if not S_MIN <= s <= S_MAX:
        raise ValueError(f"s={s} outside the supported range [{S_MIN}, {S_MAX}]")
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")


def _slot(i, sign, s, m, n):
    """(weight, factor) for the i-th interval, 0-based."""
    positive = (i % 2 == 0) == (sign == PLUS)
    return (m, s) if positive else (n, 1.0)


def _first_zero_length(weight, factor, start, target, eps, interval, p, h):
    """Shortest admissible length, or None if it overruns b."""
    lam = target / factor
    b = interval.b
    shortest = pi_p(p) * (weight.theta_plus * lam) ** (-1.0 / p)
    longest = pi_p(p) * (weight.theta_minus * lam) ** (-1.0 / p)
    if start + shortest * (1.0 - 1e-9) > b:
        return None
    stop = min(b, start + longest * (1.0 + 1e-6))
    z, _, _ = shoot(weight, eps, lam, p, start, stop, h)
    if z is None:
        if stop < b:
            raise SandwichViolation(
                f"no zero within the sandwich length {longest} from t={start} (lambda={lam})"
            )
        return None
    # lam is the first eigenvalue of (start, z); the zero is located to ~h^4
    check_sandwich(lam, Interval(start, z), p, weight.theta_minus, weight.theta_plus, 1e-6)
    return z - start


def min_length(weight, factor, start, target, eps, interval, p, steps=DEFAULT_STEPS):
    """Minimal l > 0 with factor * lambda_1(weight_eps, (start, start + l)) <= target."""
    if not target > 0 or not factor > 0:
        raise ValueError("target and factor must be positive")
    h = interval.length / steps
    ell = _first_zero_length(weight, factor, start, target, eps, interval, p, h)
    if ell is None:
        raise ExceedsDomain(
            f"level {target} needs more room than ({start}, {interval.b}) provides"
        )
    return ell


def _greedy(level, k, sign, s, m, n, eps, interval, p, h):
    t = interval.a
    points = [t]
    for i in range(k + 1):
        w, f = _slot(i, sign, s, m, n)
        ell = _first_zero_length(w, f, t, level, eps, interval, p, h)
        if ell is None:
            return None
        t += ell
        points.append(t)
    return points


def level_bracket(k, s, m, n, interval, p):
    """Lower and upper bounds on c_{k+1}(s) from the eigenvalue sandwich."""
    th_minus, th_plus = joint_bounds(m, n)
    mu = mu_k(interval, k + 1, p)
    return mu / th_plus * min(s, 1.0), mu / th_minus * s * gamma(s)


def c_value(k, sign, s, m, n, eps, interval, p, tol=DEFAULT_LEVEL_TOL, steps=DEFAULT_STEPS):
    """Minimax level c_{k+1}^{sign}(s) and an optimal partition."""
    _check_args(k, sign, s, p)
    h = interval.length / steps
    lo, hi = level_bracket(k, s, m, n, interval, p)
    lo *= 1.0 - 1e-6
    hi *= 1.0 + 1e-6
    best = _greedy(hi, k, sign, s, m, n, eps, interval, p, h)
    if best is None:
        raise InfeasibleBracket(f"upper level bound {hi} is infeasible (k={k}, s={s})")
    if _greedy(lo, k, sign, s, m, n, eps, interval, p, h) is not None:
        raise InfeasibleBracket(f"lower level bound {lo} is already feasible (k={k}, s={s})")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        pts = _greedy(mid, k, sign, s, m, n, eps, interval, p, h)
        if pts is None:
            lo = mid
        else:
            hi, best = mid, pts
    best[-1] = interval.b
    return CurvePoint(
        k=int(k),
        sign=sign,
        s=float(s),
        c=hi,
        alpha=hi / s,
        beta=hi,
        partition=Partition(tuple(best), sign),
        outside_stated_validity=p < 2,
    )


def closed_form_constant(k, sign, s, m0, n0, interval, p):
    """Exact curve point for constant weights m0, n0 by equalizing all terms."""
    _check_args(k, sign, s, p)
    if not (m0 > 0 and n0 > 0):
        raise ValueError("constant weights must be positive")
    slots = k + 1
    n_pos = (slots + 1) // 2 if sign == PLUS else slots // 2
    n_neg = slots - n_pos
    pp = pi_p(p)
    c = (pp / interval.length) ** p * (
        n_pos * (s / m0) ** (1.0 / p) + n_neg * (1.0 / n0) ** (1.0 / p)
    ) ** p
    len_pos = pp * (s / (m0 * c)) ** (1.0 / p)
    len_neg = pp * (1.0 / (n0 * c)) ** (1.0 / p)
    t = [interval.a]
    for i in range(slots):
        positive = (i % 2 == 0) == (sign == PLUS)
        t.append(t[-1] + (len_pos if positive else len_neg))
    t[-1] = interval.b
    return CurvePoint(
        k=int(k), sign=sign, s=float(s), c=c, alpha=c / s, beta=c,
        partition=Partition(tuple(t), sign), outside_stated_validity=p < 2,
    )


def check_monotone(points, rel_tol):
    """alpha decreasing and beta increasing along increasing s (strict for k >= 1)."""
    for prev, cur in zip(points, points[1:]):
        if cur.s <= prev.s:
            raise ValueError("s values must be strictly ascending")
        strict = cur.k >= 1
        slack_a = rel_tol * max(prev.alpha, cur.alpha)
        slack_b = rel_tol * max(prev.beta, cur.beta)
        a_ok = prev.alpha - cur.alpha > -slack_a if strict else cur.alpha <= prev.alpha + slack_a
        b_ok = cur.beta - prev.beta > -slack_b if strict else cur.beta >= prev.beta - slack_b
        if not (a_ok and b_ok):
            raise MonotonicityViolation(
                f"curve not monotone between s={prev.s} and s={cur.s}: "
                f"alpha {prev.alpha!r} -> {cur.alpha!r}, beta {prev.beta!r} -> {cur.beta!r}"
            )


def trace_curve(
    k, sign, s_list, m, n, eps, interval, p,
    tol=DEFAULT_LEVEL_TOL, steps=DEFAULT_STEPS, jobs=1,
):
    """c_value over an ascending list of slopes, checked for monotonicity."""
    s_list = [float(s) for s in s_list]
    if not s_list or any(s1 <= s0 for s0, s1 in zip(s_list, s_list[1:])):
        raise ValueError("s_list must be non-empty and strictly ascending")

    def one(s):
        return c_value(k, sign, s, m, n, eps, interval, p, tol=tol, steps=steps)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(one, s_list))
    else:
        points = [one(s) for s in s_list]
    check_monotone(points, 2 * tol)
    return points


# -- checkable bounds ------------------------------------------------------


def lemma_checks(point, m, n, interval, p, rel_tol=1e-9):
    """Evaluate the a-priori bounds on a computed curve point.

    Keys: ``c1_bound`` (only meaningful at s=1, else None), ``alpha_bound``,
    ``beta_bound``, ``nodal_positive``, ``nodal_negative``.
    """
    th_minus, th_plus = joint_bounds(m, n)
    mu = mu_k(interval, point.k + 1, p)
    g = gamma(point.s)
    tight = 1.0 + rel_tol
    out = {
        "c1_bound": point.c <= mu / th_minus * tight if point.s == 1.0 else None,
        "alpha_bound": point.alpha <= mu / th_minus * g * tight,
        "beta_bound": point.beta <= mu / th_minus * point.s * g * tight,
    }
    const = th_plus / th_minus * mu
    out["nodal_positive"] = all(
        mu_k(iv, 1, p) <= const * g * tight for iv in point.partition.positive()
    )
    out["nodal_negative"] = all(
        mu_k(iv, 1, p) <= const * point.s * g * tight for iv in point.partition.negative()
    )
    return out


def partition_terms(point, m, n, eps, p, tol=1e-10, steps=DEFAULT_STEPS):
    """Each term of the max on the returned partition, recomputed by eigenvalue shooting."""
    terms = []
    for i, iv in enumerate(point.partition.intervals):
        w, f = _slot(i, point.sign, point.s, m, n)
        terms.append(f * lambda1_shoot(w, eps, iv, p, tol=tol, steps=steps).lam)
    return terms
