"""Compiled RK4 shooting kernel for  (|u'|^{p-2} u')' + lam r(x/eps) |u|^{p-2} u = 0.

The state is (u, phi) with phi = |u'|^{p-2} u' the flux, so that

    u'   = |phi|^{q-2} phi        (q = p/(p-1))
    phi' = -lam r |u|^{p-2} u

Steps have fixed size h on a grid anchored at ``start`` and are split at
the jumps of a piecewise-constant weight, on which r is constant.
"""

import math

import numba as nb
import numpy as np

from .weights import KIND_CODE

STATUS_NOT_FOUND = 0
STATUS_FOUND = 1
STATUS_NONFINITE = -1


@nb.njit(cache=True, nogil=True)
def _spow(v, e):
    return math.copysign(abs(v) ** e, v)


@nb.njit(cache=True, nogil=True)
def _weight(x, kind, eps, par, breaks, values):
    if kind == 0:
        return par[0]
    y = x / eps
    y -= math.floor(y)
    if kind == 1:
        j = 0
        while j < breaks.shape[0] and y >= breaks[j]:
            j += 1
        return values[j]
    return par[0] + par[1] * math.sin(2.0 * math.pi * par[2] * y)


@nb.njit(cache=True, nogil=True)
def _next_jump(x, guard, eps, jumps):
    n = math.floor(x / eps)
    for cell in range(2):
        for j in range(jumps.shape[0]):
            cand = (n + cell + jumps[j]) * eps
            if cand > x + guard:
                return cand
    return (n + 2.0 + jumps[0]) * eps


@nb.njit(cache=True, nogil=True)
def _rk4(x, u, phi, dx, lam, p, q, kind, eps, par, breaks, values):
    if kind == 1:
        r0 = _weight(x + 0.5 * dx, kind, eps, par, breaks, values)
        r1 = r0
        r2 = r0
    else:
        r0 = _weight(x, kind, eps, par, breaks, values)
        r1 = _weight(x + 0.5 * dx, kind, eps, par, breaks, values)
        r2 = _weight(x + dx, kind, eps, par, breaks, values)
    k1u = _spow(phi, q - 1.0)
    k1f = -lam * r0 * _spow(u, p - 1.0)
    u2 = u + 0.5 * dx * k1u
    f2 = phi + 0.5 * dx * k1f
    k2u = _spow(f2, q - 1.0)
    k2f = -lam * r1 * _spow(u2, p - 1.0)
    u3 = u + 0.5 * dx * k2u
    f3 = phi + 0.5 * dx * k2f
    k3u = _spow(f3, q - 1.0)
    k3f = -lam * r1 * _spow(u3, p - 1.0)
    u4 = u + dx * k3u
    f4 = phi + dx * k3f
    k4u = _spow(f4, q - 1.0)
    k4f = -lam * r2 * _spow(u4, p - 1.0)
    un = u + dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    fn = phi + dx / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
    return un, fn


@nb.njit(cache=True, nogil=True)
def nth_zero(lam, p, start, stop, h, nzero, zero_tol, kind, eps, par, breaks, values, jumps):
    """Integrate from u(start)=0, phi(start)=1 and locate the nzero-th zero.

    Returns (position, status, steps, u_at_stop). position is ``stop`` when
    fewer than nzero zeros occur in (start, stop].
    """
    q = p / (p - 1.0)
    x = start
    u = 0.0
    phi = 1.0
    count = 0
    steps = 0
    i = 0
    next_grid = start + h
    guard = 1e-12 * h
    nj = math.inf
    if kind == 1:
        nj = _next_jump(x, guard, eps, jumps)
    while x < stop:
        xe = min(next_grid, nj, stop)
        dx = xe - x
        if dx > guard:
            un, fn = _rk4(x, u, phi, dx, lam, p, q, kind, eps, par, breaks, values)
            steps += 1
            if not (math.isfinite(un) and math.isfinite(fn)):
                return x, STATUS_NONFINITE, steps, u
            if (u > 0.0 and un <= 0.0) or (u < 0.0 and un >= 0.0):
                count += 1
                if count == nzero:
                    lo = 0.0
                    hi = dx
                    positive = u > 0.0
                    while hi - lo > zero_tol:
                        mid = 0.5 * (lo + hi)
                        um, _ = _rk4(x, u, phi, mid, lam, p, q, kind, eps, par, breaks, values)
                        if (um > 0.0) == positive and um != 0.0:
                            lo = mid
                        else:
                            hi = mid
                    return x + 0.5 * (lo + hi), STATUS_FOUND, steps, 0.0
            u = un
            phi = fn
        x = xe
        while next_grid <= x + guard:
            i += 1
            next_grid = start + (i + 1) * h
        if kind == 1 and nj <= x + guard:
            nj = _next_jump(x, guard, eps, jumps)
    return stop, STATUS_NOT_FOUND, steps, u


def kernel_weight(weight, eps):
    """Flatten a PeriodicWeight into the kernel's argument tuple."""
    kind = KIND_CODE[weight.kind]
    if weight.kind == "constant":
        par = np.array([weight.value, 0.0, 0.0])
    elif weight.kind == "trig":
        par = np.array([weight.offset, weight.amplitude, float(weight.frequency)])
    else:
        par = np.zeros(3)
    breaks = np.asarray(weight.breaks, dtype=float)
    values = np.asarray(weight.values if weight.values else (weight.value,), dtype=float)
    jumps = list(weight.breaks)
    if weight.kind == "piecewise" and weight.values[0] != weight.values[-1]:
        jumps.append(0.0)
    jumps = np.asarray(sorted(jumps) or [0.0], dtype=float)
    return kind, float(eps), par, breaks, values, jumps
