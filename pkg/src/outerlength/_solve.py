"""Bracketed scalar root finding: sign scan, bisection, Newton polish."""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError


def sign_change_brackets(fn, grid):
    """Return (lo, hi) intervals of grid where fn changes sign.

    fn must accept an ndarray.  Exact zeros on grid nodes are returned as
    degenerate brackets (node, node).
    """
    vals = np.asarray(fn(np.asarray(grid, dtype=float)))
    brackets = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            brackets.append((grid[i], grid[i]))
        elif a * b < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    if vals[-1] == 0.0:
        brackets.append((grid[-1], grid[-1]))
    return brackets


def bisect_newton(fn, lo, hi, dfn=None, xtol=1e-12, newton_steps=2, max_bisect=200):
    """Root of fn on a sign-change bracket [lo, hi]: bisection then Newton polish.

    Bisection runs to xtol, then `newton_steps` Newton iterations sharpen the
    root (skipped when dfn is None or a step would leave the bracket).
    """
    if lo == hi:
        return lo
    flo = fn(lo)
    if flo == 0.0:
        return lo
    fhi = fn(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ConvergenceError(f"no sign change on bracket ({lo}, {hi})")
    a, b, fa = lo, hi, flo
    for _ in range(max_bisect):
        m = 0.5 * (a + b)
        fm = fn(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b = m
        else:
            a, fa = m, fm
        if b - a < xtol:
            break
    root = 0.5 * (a + b)
    if dfn is not None:
        for _ in range(newton_steps):
            d = dfn(root)
            if d == 0.0:
                break
            cand = root - fn(root) / d
            if not (lo <= cand <= hi):
                break
            root = cand
    return root


def newton_1d(fn, dfn, x0, lo, hi, ftol=1e-13, max_iter=60):
    """Guarded Newton on a monotone function: falls back to bisection steps.

    Assumes fn(lo) and fn(hi) straddle zero.  Returns the root to |fn| < ftol
    or raises ConvergenceError.
    """
    a, b = lo, hi
    fa = fn(a)
    if fa == 0.0:
        return a
    x = min(max(x0, a), b)
    for _ in range(max_iter):
        fx = fn(x)
        if abs(fx) < ftol:
            return x
        if fa * fx < 0.0:
            b = x
        else:
            a = x
        d = dfn(x)
        step_ok = d != 0.0
        if step_ok:
            cand = x - fx / d
            step_ok = a < cand < b
        x = cand if step_ok else 0.5 * (a + b)
    fx = fn(x)
    if abs(fx) < ftol * 100:
        return x
    raise ConvergenceError(f"newton_1d stalled at residual {fx:.3e}")
