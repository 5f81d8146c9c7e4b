"""Cylinder special functions for integer orders and real arguments.

Thin validating wrappers around scipy.special ufuncs. Every kernel in this
package is built from J, Y, I, K and the Hankel function H1 = J + iY, so the
domain guards live here: orders 0..60, arguments in the ranges where IEEE
doubles can represent the results (x <= 500 keeps I_n below and K_n above the
representable range).

All functions accept scalars or arrays and are pure; safe for concurrent use.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

MAX_ORDER = 60
MAX_ARGUMENT = 500.0


def _check_order(n: int) -> int:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"order must be an integer, got {n!r}")
    if not 0 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in 0..{MAX_ORDER}, got {n}")
    return int(n)


def _as_argument(x, *, positive: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or (positive and np.any(x == 0)):
        bound = "> 0" if positive else ">= 0"
        raise ValueError(f"argument must be {bound}")
    if np.any(x > MAX_ARGUMENT):
        raise ValueError(f"argument must be <= {MAX_ARGUMENT}")
    return x


def bessel_j(n: int, x):
    """Bessel function of the first kind J_n(x) for 0 <= x <= 500."""
    n = _check_order(n)
    x = _as_argument(x, positive=False)
    if n == 0:
        return _sp.j0(x)
    if n == 1:
        return _sp.j1(x)
    return _sp.jv(n, x)


def bessel_y(n: int, x):
    """Bessel function of the second kind Y_n(x) for x > 0."""
    n = _check_order(n)
    x = _as_argument(x, positive=True)
    if n == 0:
        return _sp.y0(x)
    if n == 1:
        return _sp.y1(x)
    return _sp.yv(n, x)


def hankel1(n: int, x):
    """Hankel function of the first kind, exactly bessel_j + i*bessel_y."""
    return bessel_j(n, x) + 1j * bessel_y(n, x)


def bessel_i(n: int, x):
    """Modified Bessel function of the first kind I_n(x) for 0 <= x <= 500.

    Raises OverflowError if the result is not representable (cannot happen
    inside the guarded domain; the check protects future range changes).
    """
    n = _check_order(n)
    x = _as_argument(x, positive=False)
    out = _sp.i0(x) if n == 0 else _sp.i1(x) if n == 1 else _sp.iv(n, x)
    if np.any(np.isinf(out)):
        raise OverflowError(f"I_{n} overflowed; use bessel_i_scaled")
    return out


def bessel_i_scaled(n: int, x):
    """Exponentially scaled modified Bessel function e^(-x) I_n(x)."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be >= 0")
    return _sp.ive(n, x)


def bessel_k(n: int, x):
    """Modified Bessel function of the second kind K_n(x) for x > 0."""
    n = _check_order(n)
    x = _as_argument(x, positive=True)
    if n == 0:
        return _sp.k0(x)
    if n == 1:
        return _sp.k1(x)
    return _sp.kv(n, x)
