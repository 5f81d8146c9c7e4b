"""Fundamental solution of the plate wave equation and boundary kernels.

The radiating fundamental solution combines a Helmholtz and a modified
Helmholtz part,

    G(x, y) = (1/(2 kappa^2)) [ K0(kappa r)/(2 pi) - (i/4) H1_0(kappa r) ],

with r = |x - y|. The combination is only logarithmically singular: with
z = kappa*r and g0(z) := 2 kappa^2 G, the radial derivatives

    g1 = dg0/dz = -K1/(2 pi) + (i/4) H1_1,
    g2 = d2g0/dz2 = (K0 + K1/z)/(2 pi) + (i/4)(H1_0 - H1_1/z),

have no 1/z or 1/z^2 parts (they cancel between the two halves), so the 2x2
boundary block of the trace / normal-derivative layer operator

    [[G,            dG/dn(y)          ],
     [dG/dn(x),     d2G/dn(x)dn(y)    ]]

is continuous except for the ln r growth of the (2,2) entry.

For Nystroem quadrature each block entry, viewed through a curve
parameterization, is split in the standard form

    entry(t, s) = K1(t, s) * ln(4 sin^2((t-s)/2)) + K2(t, s)

with smooth biperiodic K1, K2. The log coefficients are read off the
ascending series of K0, K1, Y0, Y1: writing f = f_log * ln z + f_ent with
entire f_log, f_ent,

    g0_log = (J0 - I0)/(2 pi),
    g1_log = -(I1 + J1)/(2 pi),
    g2_log = (-I0 - J0 + (I1 + J1)/z)/(2 pi),

and K1 = (1/2) * (log coefficient of the entry), since
ln z = (1/2) ln(4 sin^2((t-s)/2)) + ln(kappa sqrt(psi)) with the smooth
positive factor psi = r^2 / (4 sin^2((t-s)/2)), psi(t,t) = |x'(t)|^2.
Diagonal values follow from the entire parts:

    K2_11(t,t) = -i/(8 kappa^2),      K2_12 = K2_21 = 0,
    K1_22(t,t) = 1/(8 pi),
    K2_22(t,t) = -rho0/2 + ln(kappa |x'(t)|)/(4 pi),
    rho0 = lim g1_ent(z)/z = (1 + 2 ln 2 - 2 gamma)/(4 pi) + i/8.

Split kernels here exclude the arclength measure |x'(s)|; assembly multiplies
it in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .geometry import ParametricCurve

__all__ = [
    "phi_helmholtz",
    "phi_modified",
    "green_biharm",
    "green_diag_limit",
    "sdir_block",
    "sdir_selfsplit",
    "farfield_kernel_row",
    "SplitKernelBlock",
    "NEAR_DIAGONAL_CUTOFF",
    "RHO0",
]

EULER_GAMMA = 0.5772156649015328606
# Entire-series branch below this parameter separation (see module docstring).
NEAR_DIAGONAL_CUTOFF = 1e-4
# lim_{z->0} g1_ent(z)/z, the constant behind the (2,2) diagonal value.
RHO0 = (1.0 + 2.0 * np.log(2.0) - 2.0 * EULER_GAMMA) / (4.0 * np.pi) + 0.125j

_COINCIDENCE_TOL = 1e-14


def phi_helmholtz(kappa: float, r):
    """Helmholtz fundamental solution (i/4) H1_0(kappa r), r > 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("distance must be > 0")
    z = kappa * r
    return 0.25j * (_sp.j0(z) + 1j * _sp.y0(z))


def phi_modified(kappa: float, r):
    """Modified Helmholtz fundamental solution K0(kappa r)/(2 pi), r > 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("distance must be > 0")
    return _sp.k0(kappa * r) / (2.0 * np.pi)


def green_diag_limit(kappa: float) -> complex:
    """Continuous extension of G(x, y) to x = y."""
    return -0.25j / (2.0 * kappa**2)


def green_biharm(kappa: float, x, y):
    """Radiating fundamental solution G(x, y) = (Phi_mod - Phi_helm)/(2 kappa^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(x - y, axis=-1)
    if np.any(r < _COINCIDENCE_TOL):
        raise ValueError("coincident points; use green_diag_limit for the x=y value")
    return (phi_modified(kappa, r) - phi_helmholtz(kappa, r)) / (2.0 * kappa**2)


def _g012(z):
    """g0, g1, g2 for z > 0 via special functions."""
    j0, j1 = _sp.j0(z), _sp.j1(z)
    y0, y1 = _sp.y0(z), _sp.y1(z)
    k0, k1 = _sp.k0(z), _sp.k1(z)
    h0 = j0 + 1j * y0
    h1 = j1 + 1j * y1
    inv2pi = 1.0 / (2.0 * np.pi)
    g0 = inv2pi * k0 - 0.25j * h0
    g1 = -inv2pi * k1 + 0.25j * h1
    g2 = inv2pi * (k0 + k1 / z) + 0.25j * (h0 - h1 / z)
    return g0, g1, g2


def _glog(z):
    """Entire ln-z coefficients (g0_log, g1_log, g1_log/z, g2_log)."""
    j0, j1 = _sp.j0(z), _sp.j1(z)
    i0, i1 = _sp.i0(z), _sp.i1(z)
    inv2pi = 1.0 / (2.0 * np.pi)
    g0l = inv2pi * (j0 - i0)
    g1l = -inv2pi * (i1 + j1)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(z > 0, (i1 + j1) / np.where(z > 0, z, 1.0), 1.0)
    g1l_over_z = -inv2pi * ratio
    g2l = inv2pi * (ratio - i0 - j0)
    return g0l, g1l, g1l_over_z, g2l


_SERIES_K = 9
_HARMONIC = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, _SERIES_K + 2))])
_FACT = _sp.factorial(np.arange(_SERIES_K + 2), exact=False)


def _gent(z):
    """Entire regular parts (g0_ent, g1_ent/z, g2_ent) by ascending series.

    Accurate to machine precision for z <= 0.5; used on the near-diagonal
    branch only, where z = kappa*r is far smaller.
    """
    z = np.asarray(z, dtype=float)
    u = 0.25 * z * z
    c = EULER_GAMMA - np.log(2.0)
    j0, j1 = _sp.j0(z), _sp.j1(z)
    i0, i1 = _sp.i0(z), _sp.i1(z)

    tk0 = np.zeros_like(u)      # sum h_k u^k/(k!)^2, k>=1
    ty0 = np.zeros_like(u)      # sum (-1)^(k+1) h_k u^k/(k!)^2, k>=1
    tkz = np.zeros_like(u)      # T_K/z = (1/2) sum (h_k+h_{k+1}) u^k/(k!(k+1)!)
    tyz = np.zeros_like(u)      # T_Y/z = (1/2) sum (-1)^k (h_k+h_{k+1}) u^k/(k!(k+1)!)
    i1z = np.zeros_like(u)      # I1/z = (1/2) sum u^k/(k!(k+1)!)
    j1z = np.zeros_like(u)      # J1/z = (1/2) sum (-1)^k u^k/(k!(k+1)!)
    upow = np.ones_like(u)
    for k in range(_SERIES_K + 1):
        sgn = -1.0 if k % 2 else 1.0
        if k >= 1:
            w = _HARMONIC[k] * upow / (_FACT[k] ** 2)
            tk0 += w
            ty0 += -sgn * w
        w2 = upow / (_FACT[k] * _FACT[k + 1])
        tkz += 0.5 * (_HARMONIC[k] + _HARMONIC[k + 1]) * w2
        tyz += 0.5 * sgn * (_HARMONIC[k] + _HARMONIC[k + 1]) * w2
        i1z += 0.5 * w2
        j1z += 0.5 * sgn * w2
        upow = upow * u

    k0r = -c * i0 + tk0
    y0r = (2.0 / np.pi) * (c * j0 + ty0)
    k1r_z = c * i1z - 0.5 * tkz            # (K1 - I1 ln z - 1/z) / z
    y1r_z = (2.0 / np.pi) * c * j1z - tyz / np.pi

    inv2pi = 1.0 / (2.0 * np.pi)
    g0e = inv2pi * k0r + 0.25 * y0r - 0.25j * j0
    g1e_over_z = -inv2pi * k1r_z + 0.25j * j1z - 0.25 * y1r_z
    g2e = inv2pi * (k0r + k1r_z) + 0.25j * (j0 - j1z) - 0.25 * (y0r - y1r_z)
    return g0e, g1e_over_z, g2e


def _block_entries(kappa, xs, nx, ys, ny):
    """The four kernel entries for point arrays xs (.., 2) vs ys (.., 2).

    Broadcasts xs against ys; returns (A11, A12, A21, A22) and leaves
    coincident pairs as NaN for the caller to overwrite.
    """
    diff = xs - ys
    r = np.linalg.norm(diff, axis=-1)
    pos = r > 0
    rsafe = np.where(pos, r, 1.0)
    rhat = diff / rsafe[..., None]
    z = kappa * rsafe
    g0, g1, g2 = _g012(z)
    rn_x = np.sum(rhat * nx, axis=-1)
    rn_y = np.sum(rhat * ny, axis=-1)
    p = np.sum(nx * ny, axis=-1)
    q = rn_x * rn_y
    a11 = g0 / (2.0 * kappa**2)
    a12 = -(g1 / (2.0 * kappa)) * rn_y
    a21 = (g1 / (2.0 * kappa)) * rn_x
    a22 = -(0.5 * g2 * q + (g1 / (2.0 * z)) * (p - q))
    invalid = ~pos
    if np.any(invalid):
        for a in (a11, a12, a21, a22):
            a[invalid] = np.nan
    return a11, a12, a21, a22


def sdir_block(kappa: float, xcurve: ParametricCurve, t, ycurve: ParametricCurve, s):
    """2x2 kernel block of the trace/normal-derivative layer operator.

    Rows: trace at x(t), normal derivative at x(t); columns: single-layer
    (density tau), double-layer (density sigma). Raises on coincident points.
    """
    x = xcurve.point(t)
    y = ycurve.point(s)
    if np.linalg.norm(x - y) < _COINCIDENCE_TOL:
        raise ValueError("coincident boundary points; use sdir_selfsplit diagonals")
    a11, a12, a21, a22 = _block_entries(
        kappa, x, xcurve.normal(t), y, ycurve.normal(s)
    )
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


@dataclass(frozen=True)
class SplitKernelBlock:
    """Kress splitting entry = k1 * ln(4 sin^2((t-s)/2)) + k2 of one block.

    k1 and k2 are smooth biperiodic 2x2 blocks (arclength measure excluded).
    """

    k1: np.ndarray
    k2: np.ndarray


def _split_arrays(kappa, curve, t, s):
    """Vectorized K1/K2 blocks on a same-curve parameter grid (t vs s).

    t, s broadcast against each other; shape of the result is (2, 2) + shape.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    t, s = np.broadcast_arrays(t, s)
    t, s = np.atleast_1d(t), np.atleast_1d(s)
    x, y = curve.point(t), curve.point(s)
    nx, ny = curve.normal(t), curve.normal(s)
    spd_t = curve.speed(t)

    diff = x - y
    r = np.linalg.norm(diff, axis=-1)
    dt_wrapped = np.abs((t - s + np.pi) % (2.0 * np.pi) - np.pi)
    on_diag = dt_wrapped < 1e-13
    near = (dt_wrapped < NEAR_DIAGONAL_CUTOFF) & ~on_diag
    far = ~near & ~on_diag

    rsafe = np.where(on_diag, 1.0, r)
    z = kappa * rsafe
    rhat = diff / rsafe[..., None]
    rn_x = np.sum(rhat * nx, axis=-1)
    rn_y = np.sum(rhat * ny, axis=-1)
    p = np.sum(nx * ny, axis=-1)
    q = rn_x * rn_y

    g0l, g1l, g1l_over_z, g2l = _glog(z)
    half = 0.5
    k1_11 = half * g0l / (2.0 * kappa**2)
    k1_12 = half * (-(g1l / (2.0 * kappa)) * rn_y)
    k1_21 = half * ((g1l / (2.0 * kappa)) * rn_x)
    k1_22 = half * (-(0.5 * g2l * q + 0.5 * g1l_over_z * (p - q)))
    k1 = np.stack([np.stack([k1_11, k1_12]), np.stack([k1_21, k1_22])]).astype(complex)

    k2 = np.zeros_like(k1)
    log_basis = np.where(on_diag | near, 1.0, 4.0 * np.sin(0.5 * (t - s)) ** 2)
    if np.any(far):
        a11, a12, a21, a22 = _block_entries(kappa, x, nx, y, ny)
        lnb = np.log(log_basis)
        k2[0, 0][far] = (a11 - k1[0, 0] * lnb)[far]
        k2[0, 1][far] = (a12 - k1[0, 1] * lnb)[far]
        k2[1, 0][far] = (a21 - k1[1, 0] * lnb)[far]
        k2[1, 1][far] = (a22 - k1[1, 1] * lnb)[far]
    if np.any(near):
        g0e, g1e_over_z, g2e = _gent(z)
        e11 = g0e / (2.0 * kappa**2)
        e12 = -(g1e_over_z * z / (2.0 * kappa)) * rn_y
        e21 = (g1e_over_z * z / (2.0 * kappa)) * rn_x
        e22 = -(0.5 * g2e * q + 0.5 * g1e_over_z * (p - q))
        # K2 = entire part + log coefficient * ln(kappa*sqrt(psi)),
        # psi = r^2 / (4 sin^2((t-s)/2)).
        psi = r**2 / (4.0 * np.sin(0.5 * (t - s)) ** 2 + (on_diag | far))
        ln_comp = np.log(kappa * np.sqrt(np.where(near, psi, 1.0)))
        k2[0, 0][near] = (e11 + 2.0 * k1[0, 0] * ln_comp)[near]
        k2[0, 1][near] = (e12 + 2.0 * k1[0, 1] * ln_comp)[near]
        k2[1, 0][near] = (e21 + 2.0 * k1[1, 0] * ln_comp)[near]
        k2[1, 1][near] = (e22 + 2.0 * k1[1, 1] * ln_comp)[near]
    if np.any(on_diag):
        k1[0, 0][on_diag] = 0.0
        k1[0, 1][on_diag] = 0.0
        k1[1, 0][on_diag] = 0.0
        k1[1, 1][on_diag] = 1.0 / (8.0 * np.pi)
        k2[0, 0][on_diag] = -0.25j / (2.0 * kappa**2)
        k2[0, 1][on_diag] = 0.0
        k2[1, 0][on_diag] = 0.0
        k2[1, 1][on_diag] = (-0.5 * RHO0
                             + np.log(kappa * spd_t[on_diag]) / (4.0 * np.pi))
    return k1, k2


def sdir_selfsplit(kappa: float, curve: ParametricCurve, t: float, s: float) -> SplitKernelBlock:
    """Kress splitting of the parametrized kernel block at parameters (t, s)."""
    k1, k2 = _split_arrays(kappa, curve, float(t), float(s))
    return SplitKernelBlock(k1=k1.reshape(2, 2).astype(complex),
                            k2=k2.reshape(2, 2).astype(complex))


def farfield_kernel_row(kappa: float, xhat, curve: ParametricCurve, s):
    """Plane-wave far-field integrand (e^{-ik xhat.y}, -ik (xhat.n) e^{-ik xhat.y})."""
    xhat = np.asarray(xhat, dtype=float)
    if abs(np.linalg.norm(xhat) - 1.0) > 1e-12:
        raise ValueError("observation direction must be a unit vector")
    y = curve.point(s)
    n = curve.normal(s)
    phase = np.exp(-1j * kappa * (y @ xhat))
    return np.array([phase, -1j * kappa * (n @ xhat) * phase])
