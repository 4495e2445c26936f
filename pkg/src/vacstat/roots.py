"""Bracketing root finder: bisection down to a coarse width, then safeguarded Newton."""

from __future__ import annotations

from typing import Callable

import numpy as np


def bisect_newton(func: Callable[[float], float], dfunc: Callable[[float], float],
                  lo: float, hi: float, xtol: float = 1e-12, maxiter: int = 200) -> float:
    """Root of ``func`` in the sign-changing bracket [lo, hi].

    Bisection shrinks the bracket to 1e-4 of its width; Newton steps that
    leave the current bracket or fail to shrink the residual fall back to
    bisection.  Converges to ``xtol`` relative to max(1, |x|).
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError(f"root not bracketed in [{lo}, {hi}]")
    coarse = 1e-4 * (hi - lo)
    while hi - lo > coarse:
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    fx = func(x)
    for _ in range(maxiter):
        d = dfunc(x)
        step = fx / d if d != 0.0 else np.inf
        xn = x - step
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        fn = func(xn)
        if np.sign(fn) == np.sign(flo):
            lo, flo = xn, fn
        else:
            hi = xn
        if abs(xn - x) <= xtol * max(1.0, abs(xn)) or fn == 0.0:
            return xn
        x, fx = xn, fn
    return x


def bracket_sign_changes(func: Callable[[np.ndarray], np.ndarray], grid: np.ndarray):
    """Consecutive grid pairs where a vectorised ``func`` changes sign (or hits zero)."""
    vals = func(grid)
    out = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            out.append((grid[i], grid[i]))
        elif a * b < 0:
            out.append((grid[i], grid[i + 1]))
    return out
