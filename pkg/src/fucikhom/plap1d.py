"""First eigenvalue of the weighted Dirichlet p-Laplacian on an interval.

Two independent routes are provided:

* :func:`lambda1_shoot`: bisection on lambda, the first zero of the
  shooting solution being a strictly decreasing function of lambda;
* :func:`lambda1_rayleigh`: nonlinear inverse iteration on the discrete
  Rayleigh quotient over continuous piecewise-linear functions.

Both accept ``eps=None`` to mean the homogenized (cell-mean) weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .errors import BracketFailure, NonConvergence, SandwichViolation, StepFailure
from .weights import Interval, resolve

DEFAULT_TOL = 1e-8
DEFAULT_STEPS = 4096


@dataclass(frozen=True)
class EigenEstimate:
    lam: float
    method: str  # "shooting" | "rayleigh" | "closed-form"
    residual: float
    evaluations: int


def conjugate(p: float) -> float:
    _check_p(p)
    return p / (p - 1.0)


def _check_p(p):
    if not (p > 1.0 and math.isfinite(p)):
        raise ValueError(f"p must satisfy 1 < p < inf, got {p}")


@lru_cache(maxsize=256)
def pi_p(p: float) -> float:
    """2 (p-1)^{1/p} * int_0^1 (1 - s^p)^{-1/p} ds.

    The endpoint singularity at s=1 is removed by s = 1 - tau^{q}, q = p/(p-1),
    which turns the integrand into a bounded smooth function of tau.
    """
    _check_p(p)
    q = p / (p - 1.0)

    def integrand(tau):
        if tau == 0.0:
            return q * p ** (-1.0 / p)
        t = tau**q
        # 1 - (1 - t)^p without cancellation
        gap = -math.expm1(p * math.log1p(-t))
        return q * gap ** (-1.0 / p) * tau ** (q - 1.0)

    val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    return 2.0 * (p - 1.0) ** (1.0 / p) * val


def mu_k(interval: Interval, k: int, p: float) -> float:
    """k-th Dirichlet eigenvalue of the unweighted p-Laplacian on ``interval``."""
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k}")
    return (pi_p(p) * k / interval.length) ** p


def lambda_k_constant(c: float, interval: Interval, k: int, p: float) -> float:
    if not c > 0:
        raise ValueError("constant weight must be positive")
    return mu_k(interval, k, p) / c


def check_sandwich(lam, interval, p, theta_minus, theta_plus, rel_tol=DEFAULT_TOL):
    """Raise unless mu_1/theta_+ <= lam <= mu_1/theta_- up to ``rel_tol``."""
    mu1 = mu_k(interval, 1, p)
    lo, hi = mu1 / theta_plus, mu1 / theta_minus
    slack = rel_tol * abs(lam)
    if not (lo - slack <= lam <= hi + slack):
        raise SandwichViolation(
            f"lambda_1={lam!r} outside [{lo!r}, {hi!r}] on ({interval.a}, {interval.b}), p={p}"
        )
    return True


# -- shooting -----------------------------------------------------------


def shoot(weight, eps, lam, p, start, stop, h, nzero=1, zero_tol=None):
    """Position of the ``nzero``-th zero of the shooting solution started at ``start``.

    Returns (position or None, steps, u(stop)); None when the zero lies beyond ``stop``.
    """
    w, e = resolve(weight, eps)
    if zero_tol is None:
        zero_tol = 1e-12 * (stop - start)
    pos, status, steps, u_end = _kernels.nth_zero(
        float(lam), float(p), float(start), float(stop), float(h), int(nzero),
        float(zero_tol), *_kernels.kernel_weight(w, e),
    )
    if status == _kernels.STATUS_NONFINITE:
        raise StepFailure(f"non-finite state at x={pos} (lam={lam}, p={p})")
    return (pos if status == _kernels.STATUS_FOUND else None), steps, u_end


def lambda1_shoot(weight, eps, interval, p, tol=DEFAULT_TOL, steps=DEFAULT_STEPS):
    """First eigenvalue by shooting from ``a`` with u(a)=0, u'(a)=1.

    The bracket [mu_1/theta_+, mu_1/theta_-] always contains lambda_1; it is
    bisected until its relative width drops below ``tol``.
    """
    _check_p(p)
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = interval.a, interval.b
    h = interval.length / steps
    mu1 = mu_k(interval, 1, p)
    lo = mu1 / weight.theta_plus * (1.0 - 1e-6)
    hi = mu1 / weight.theta_minus * (1.0 + 1e-6)
    total = 0

    def hits(lam):
        nonlocal total
        z, n, _ = shoot(weight, eps, lam, p, a, b, h)
        total += n
        return z is not None

    if hits(lo) or not hits(hi):
        raise BracketFailure(
            f"sandwich bracket [{lo}, {hi}] does not straddle lambda_1 on ({a}, {b})"
        )
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if hits(mid):
            hi = mid
        else:
            lo = mid
    lam = 0.5 * (lo + hi)
    _, n, u_b = shoot(weight, eps, lam, p, a, b, h, nzero=1 << 30)
    total += n
    check_sandwich(lam, interval, p, weight.theta_minus, weight.theta_plus, tol)
    return EigenEstimate(lam, "shooting", abs(u_b), total)


# -- discrete Rayleigh quotient -------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _mass_quadrature(weight, eps, interval, n):
    """Quadrature (cell index, local coordinate, weight * r) for int_I r |u|^p."""
    nodes = np.linspace(interval.a, interval.b, n + 1)
    cuts = weight.discontinuities(eps, interval.a, interval.b) if eps is not None else np.empty(0)
    pts = np.union1d(nodes, cuts)
    left, right = pts[:-1], pts[1:]
    width = right - left
    x = left[:, None] + width[:, None] * _GL_X[None, :]
    cell = np.minimum(np.searchsorted(nodes, 0.5 * (left + right), side="right") - 1, n - 1)
    cell = np.repeat(cell, _GL_X.size)
    x = x.ravel()
    w, e = resolve(weight, eps)
    wr = (width[:, None] * _GL_W[None, :]).ravel() * w.scaled(e, x)
    xi = (x - nodes[cell]) / (nodes[cell + 1] - nodes[cell])
    return cell, xi, wr


def _rayleigh_parts(u_full, cell, xi, wr, h, p):
    du = np.diff(u_full) / h
    num = h * np.sum(np.abs(du) ** p)
    uq = u_full[cell] * (1.0 - xi) + u_full[cell + 1] * xi
    den = np.sum(wr * np.abs(uq) ** p)
    return num, den, uq


def _solve_plaplace(load, h, p):
    """Discrete Dirichlet problem: flux jumps phi_{j-1} - phi_j = load_j."""
    q = p / (p - 1.0)
    cum = np.concatenate(([0.0], np.cumsum(load)))

    def net(phi0):
        phi = phi0 - cum
        return np.sum(np.sign(phi) * np.abs(phi) ** (q - 1.0))

    lo, hi = cum.min(), cum.max()
    if lo == hi:
        return np.zeros(load.size + 2)
    phi0 = optimize.brentq(net, lo, hi, xtol=1e-15 * max(abs(lo), abs(hi)), rtol=1e-15, maxiter=500)
    phi = phi0 - cum
    slopes = np.sign(phi) * np.abs(phi) ** (q - 1.0)
    u = np.concatenate(([0.0], h * np.cumsum(slopes)))
    u[-1] = 0.0
    return u


def lambda1_rayleigh(weight, eps, interval, p, grid_n=1024, rel_tol=1e-10, max_iter=2000):
    """Minimize the Rayleigh quotient over P1 functions on a uniform grid.

    Each iterate solves the discrete p-Laplace problem with load
    r |u|^{p-2} u exactly (a monotone scalar root in 1D), then is normalized
    in the weighted p-norm. An increase of the quotient triggers a damped
    update. The value returned is an upper bound of lambda_1 up to quadrature
    error and decreases to it as grid_n grows.
    """
    _check_p(p)
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    n = int(grid_n)
    h = interval.length / n
    cell, xi, wr = _mass_quadrature(weight, eps, interval, n)
    x = np.linspace(interval.a, interval.b, n + 1)
    u = np.sin(np.pi * (x - interval.a) / interval.length)
    num, den, uq = _rayleigh_parts(u, cell, xi, wr, h, p)
    u /= den ** (1.0 / p)
    quot = num / den

    for it in range(1, max_iter + 1):
        num, den, uq = _rayleigh_parts(u, cell, xi, wr, h, p)
        g = wr * np.sign(uq) * np.abs(uq) ** (p - 1.0)
        load = np.bincount(cell, g * (1.0 - xi), minlength=n + 1)
        load += np.bincount(cell + 1, g * xi, minlength=n + 1)
        w = _solve_plaplace(load[1:-1], h, p)
        num_w, den_w, _ = _rayleigh_parts(w, cell, xi, wr, h, p)
        new = num_w / den_w
        if new > quot:
            w = 0.5 * (u + w / den_w ** (1.0 / p))
            num_w, den_w, _ = _rayleigh_parts(w, cell, xi, wr, h, p)
            new = num_w / den_w
        u = w / den_w ** (1.0 / p)
        gap = abs(quot - new) / new
        quot = new
        if gap <= rel_tol:
            # discretization lifts the value by O(h^2)
            check_sandwich(quot, interval, p, weight.theta_minus, weight.theta_plus, 10.0 / n**2)
            return EigenEstimate(quot, "rayleigh", gap, it)
    raise NonConvergence(
        f"Rayleigh iteration stalled at relative change {gap:.3e} after {max_iter} iterations"
    )


def closed_form(weight, interval, p, k=1):
    """Exact eigenvalue for a constant weight."""
    if not weight.is_constant:
        raise ValueError("closed form only available for constant weights")
    return EigenEstimate(lambda_k_constant(weight.mean, interval, k, p), "closed-form", 0.0, 0)
