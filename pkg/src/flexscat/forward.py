"""Direct scattering: Nystroem boundary solver and far-field matrices.

The scattered field is represented as a combined single- plus double-layer
potential with the plate-wave kernel,

    u_sc(x) = int_dD [ G(x,y) tau(y) + dG/dn(y)(x,y) sigma(y) ] ds(y),

whose trace and normal derivative are continuous across the boundary, so the
clamped condition u_sc = -u_in, du_sc/dn = -du_in/dn becomes a second-kind-
free 2x2 system of weakly singular integral equations for (tau, sigma).
Self-interaction blocks use the Kress log-quadrature; distinct curves couple
through plain trapezoid sums. The far-field pattern of the potential is

    u_inf(xhat) = -(1/(2 kappa^2)) int_dD e^{-i kappa xhat.y}
                  [ tau(y) - i kappa (xhat.n(y)) sigma(y) ] ds(y),

and the discrete far-field operator is F[i, j] = (2 pi / N) u_inf(d_i; d_j)
on the equispaced direction grid d_j = (cos 2 pi (j-1)/N, sin 2 pi (j-1)/N).

A separation-of-variables solver for disks provides an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import specfun
from .geometry import ObstacleScene, ParametricCurve, QuadratureLayout, quadrature_layout
from .kernels import _block_entries, _split_arrays

__all__ = [
    "DensityPair",
    "FarFieldMatrix",
    "BoundarySystem",
    "direction_grid",
    "kress_log_weights",
    "assemble",
    "solve_plane_wave",
    "far_field_vector",
    "far_field_matrix",
    "disk_series_far_field",
    "unitarity_residual",
    "far_identity_residual",
]


def direction_grid(n: int) -> np.ndarray:
    """N unit directions d_j = (cos 2 pi (j-1)/N, sin 2 pi (j-1)/N), shape (N, 2)."""
    if n < 8 or n % 2:
        raise ValueError("direction count must be even and >= 8")
    ang = 2.0 * np.pi * np.arange(n) / n
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)


@dataclass(frozen=True)
class DensityPair:
    """Nystroem samples of the layer densities on the scene boundary."""

    tau: np.ndarray
    sigma: np.ndarray
    layout: QuadratureLayout

    def __post_init__(self):
        k = self.layout.total_nodes
        if self.tau.shape != (k,) or self.sigma.shape != (k,):
            raise ValueError("density length must equal the node count")


@dataclass(frozen=True)
class FarFieldMatrix:
    """Trapezoid-scaled far-field matrix, entry (i,j) = (2 pi/N) u_inf(d_i, d_j)."""

    entries: np.ndarray
    kappa: float

    def __post_init__(self):
        n = self.entries.shape[0]
        if self.entries.shape != (n, n) or n < 8 or n % 2:
            raise ValueError("far-field matrix must be square with even N >= 8")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("far-field matrix has non-finite entries")

    @property
    def n_directions(self) -> int:
        return self.entries.shape[0]

    def directions(self) -> np.ndarray:
        return direction_grid(self.n_directions)


@dataclass(frozen=True)
class BoundarySystem:
    """Dense 2K x 2K Nystroem matrix with a cached LU factorization.

    Row/column blocks are ordered (all tau nodes, all sigma nodes); the row
    component is (trace, normal derivative) of the boundary operator.
    """

    matrix: np.ndarray
    layout: QuadratureLayout
    kappa: float
    _lu: tuple = field(repr=False, default=None)

    def apply(self, tau: np.ndarray, sigma: np.ndarray):
        """Boundary values (trace, normal derivative) of the potential."""
        k = self.layout.total_nodes
        out = self.matrix @ np.concatenate([tau, sigma])
        return out[:k], out[k:]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        out = scipy.linalg.lu_solve(self._lu, rhs)
        if not np.all(np.isfinite(out)):
            raise np.linalg.LinAlgError(
                "boundary system solve produced non-finite values; kappa^4 may "
                "be an interior clamped-plate eigenvalue of a scene component"
            )
        return out


def kress_log_weights(mhalf: int) -> np.ndarray:
    """Quadrature weights R(|i-j|) for the ln(4 sin^2((t-s)/2)) factor.

    With 2*mhalf nodes t_j = j pi/mhalf the rule
    sum_j R(t - t_j) f(t_j) integrates ln(4 sin^2((t-s)/2)) f(s) exactly for
    trigonometric polynomials f up to degree mhalf:

        R(d) = -(2 pi/mhalf) sum_{m=1}^{mhalf-1} cos(m d)/m
               - (pi/mhalf^2) cos(mhalf d).

    Returns the vector R at d = (i-j) pi/mhalf for i-j = 0..2*mhalf-1.
    """
    d = np.arange(2 * mhalf) * (np.pi / mhalf)
    m = np.arange(1, mhalf)
    r = -(2.0 * np.pi / mhalf) * (np.cos(np.outer(d, m)) @ (1.0 / m))
    r -= (np.pi / mhalf**2) * np.cos(mhalf * d)
    return r


def assemble(scene: ObstacleScene | ParametricCurve, kappa: float, mhalf: int) -> BoundarySystem:
    """Nystroem matrix of the boundary operator on the scene at wavenumber kappa.

    kappa^4 must not be an interior clamped-plate (Dirichlet bi-Laplacian)
    eigenvalue of any scene component; the solve reports ill-conditioning if
    it is.
    """
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    layout = quadrature_layout(scene, mhalf)
    k = layout.total_nodes
    a = np.zeros((2 * k, 2 * k), dtype=complex)
    t = layout.nodes
    n_per = 2 * mhalf
    rvec = kress_log_weights(mhalf)
    idx = np.arange(n_per)
    rmat = rvec[np.abs(idx[:, None] - idx[None, :])]
    w_smooth = np.pi / mhalf

    for ci, sl in enumerate(layout.slices):
        curve = layout.scene.curves[ci]
        k1, k2 = _split_arrays(kappa, curve, t[:, None], t[None, :])
        sp_src = layout.speeds[sl]
        for bi in range(2):
            for bj in range(2):
                block = (rmat * k1[bi, bj] + w_smooth * k2[bi, bj]) * sp_src[None, :]
                a[bi * k + sl.start: bi * k + sl.stop,
                  bj * k + sl.start: bj * k + sl.stop] = block

    for ci, sli in enumerate(layout.slices):
        for cj, slj in enumerate(layout.slices):
            if ci == cj:
                continue
            e11, e12, e21, e22 = _block_entries(
                kappa,
                layout.points[sli][:, None, :], layout.normals[sli][:, None, :],
                layout.points[slj][None, :, :], layout.normals[slj][None, :, :],
            )
            w = w_smooth * layout.speeds[slj][None, :]
            for bi, bj, e in ((0, 0, e11), (0, 1, e12), (1, 0, e21), (1, 1, e22)):
                a[bi * k + sli.start: bi * k + sli.stop,
                  bj * k + slj.start: bj * k + slj.stop] = e * w

    lu = scipy.linalg.lu_factor(a)
    return BoundarySystem(matrix=a, layout=layout, kappa=kappa, _lu=lu)


def _incident_trace(layout: QuadratureLayout, kappa: float, d: np.ndarray):
    phase = np.exp(1j * kappa * (layout.points @ d))
    return phase, 1j * kappa * (layout.normals @ d) * phase


def solve_plane_wave(system: BoundarySystem, d) -> DensityPair:
    """Densities for the incident plane wave e^{i kappa x.d}."""
    d = np.asarray(d, dtype=float)
    u, du = _incident_trace(system.layout, system.kappa, d)
    sol = system.solve(-np.concatenate([u, du]))
    k = system.layout.total_nodes
    return DensityPair(tau=sol[:k], sigma=sol[k:], layout=system.layout)


def _farfield_eval_matrix(layout: QuadratureLayout, kappa: float,
                          directions: np.ndarray) -> np.ndarray:
    """Matrix mapping stacked (tau, sigma) node values to far-field samples."""
    phase = np.exp(-1j * kappa * (directions @ layout.points.T))
    w = layout.weights[None, :]
    e_tau = phase * w
    e_sigma = (-1j * kappa) * (directions @ layout.normals.T) * phase * w
    return -np.concatenate([e_tau, e_sigma], axis=1) / (2.0 * kappa**2)


def far_field_vector(densities: DensityPair, kappa: float, directions) -> np.ndarray:
    """Far-field pattern of the layer potential at the given unit directions."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    e = _farfield_eval_matrix(densities.layout, kappa, directions)
    return e @ np.concatenate([densities.tau, densities.sigma])


def far_field_matrix(scene: ObstacleScene | ParametricCurve, kappa: float,
                     n: int, mhalf: int) -> FarFieldMatrix:
    """Discrete far-field operator: one LU factorization, N plane-wave solves."""
    dirs = direction_grid(n)
    system = assemble(scene, kappa, mhalf)
    layout = system.layout
    u = np.exp(1j * kappa * (layout.points @ dirs.T))
    du = 1j * kappa * (layout.normals @ dirs.T) * u
    sols = system.solve(-np.concatenate([u, du], axis=0))
    e = _farfield_eval_matrix(layout, kappa, dirs)
    return FarFieldMatrix(entries=(2.0 * np.pi / n) * (e @ sols), kappa=kappa)


def _jp(n, x):
    return specfun.bessel_j(n - 1, x) - (n / x) * specfun.bessel_j(n, x) if n \
        else -specfun.bessel_j(1, x)


def _hp(n, x):
    return specfun.hankel1(n - 1, x) - (n / x) * specfun.hankel1(n, x) if n \
        else -specfun.hankel1(1, x)


def _kp(n, x):
    return -specfun.bessel_k(n - 1, x) - (n / x) * specfun.bessel_k(n, x) if n \
        else -specfun.bessel_k(1, x)


def disk_series_far_field(center, radius: float, kappa: float, n: int,
                          n_max: int = 60) -> FarFieldMatrix:
    """Mode-matching far-field matrix for a clamped disk (solver oracle).

    Per angular mode m the clamped conditions at rho = radius give

        a_m H1_m(ka) + b_m K_m(ka) = -i^m J_m(ka),
        a_m H1_m'(ka) + b_m K_m'(ka) = -i^m J_m'(ka),

    and the far field synthesizes from the radiating coefficients as
    u_inf(theta_x - theta_d) = -4i [a_0 + 2 sum_m a_m (-i)^m cos(m dtheta)].
    A center offset contributes the phase e^{i kappa (d - xhat).center}.

    n_max must be large enough that |a_{n_max}| < 1e-14 max|a_m|.
    """
    if radius <= 0 or kappa <= 0:
        raise ValueError("radius and kappa must be > 0")
    x = kappa * radius
    a = np.empty(n_max + 1, dtype=complex)
    for m in range(n_max + 1):
        hm, km, jm = specfun.hankel1(m, x), specfun.bessel_k(m, x), specfun.bessel_j(m, x)
        hpm, kpm, jpm = _hp(m, x), _kp(m, x), _jp(m, x)
        det = hm * kpm - hpm * km
        if det == 0:
            raise np.linalg.LinAlgError(f"singular mode system at order {m}")
        a[m] = -(1j**m) * (jm * kpm - jpm * km) / det
    if abs(a[n_max]) >= 1e-14 * np.max(np.abs(a)):
        raise ValueError(
            f"n_max={n_max} too small: last mode coefficient {abs(a[n_max]):.2e} "
            f"vs largest {np.max(np.abs(a)):.2e}"
        )
    dtheta = 2.0 * np.pi * np.arange(n) / n
    m = np.arange(1, n_max + 1)
    profile = -4j * (a[0] + 2.0 * ((a[1:] * (-1j) ** m) @ np.cos(np.outer(m, dtheta))))
    i = np.arange(n)
    f0 = (2.0 * np.pi / n) * profile[(i[:, None] - i[None, :]) % n]
    center = np.asarray(center, dtype=float)
    if np.any(center != 0.0):
        dirs = direction_grid(n)
        ph = np.exp(1j * kappa * (dirs @ center))
        f0 = np.conj(ph)[:, None] * f0 * ph[None, :]
    return FarFieldMatrix(entries=f0, kappa=kappa)


def unitarity_residual(f: FarFieldMatrix) -> float:
    """|| L L* - I ||_F for L = I + (i/(4 pi)) F; zero for exact data."""
    n = f.n_directions
    ell = np.eye(n) + (0.25j / np.pi) * f.entries
    return float(np.linalg.norm(ell @ ell.conj().T - np.eye(n)))


def far_identity_residual(f: FarFieldMatrix) -> float:
    """|| F - F* - (i/(4 pi)) F* F ||_F / ||F||_F; zero for exact data."""
    m = f.entries
    res = m - m.conj().T - (0.25j / np.pi) * (m.conj().T @ m)
    return float(np.linalg.norm(res) / np.linalg.norm(m))
