"""Boundary curves, multi-obstacle scenes, and quadrature layouts.

Every built-in shape is a trigonometric polynomial, so curves are stored as
harmonic coefficient tables and all derivatives (up to the third, needed for
the kernel splittings) are exact. Parameterizations run counterclockwise over
[0, 2*pi); the outward unit normal is (x2', -x1')/|x'|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParametricCurve",
    "ObstacleScene",
    "QuadratureLayout",
    "make_shape",
    "outward_normal",
    "contains",
    "quadrature_layout",
    "SHAPE_KINDS",
]

SHAPE_KINDS = ("circle", "ellipse", "rounded_square", "rounded_triangle", "kite")


@dataclass(frozen=True)
class ParametricCurve:
    """Closed curve x(t) = sum_k a_k cos(kt) + b_k sin(kt), t in [0, 2*pi).

    Attributes
    ----------
    label : str
        Shape name, e.g. "circle(r=0.4)".
    cos_coeffs, sin_coeffs : np.ndarray, shape (deg+1, 2)
        Harmonic coefficients per Cartesian component; row k multiplies
        cos(kt) / sin(kt). Row 0 of sin_coeffs is unused.
    """

    label: str
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def point(self, t):
        return self._eval(t, order=0)

    def deriv(self, t, order: int = 1):
        """Exact derivative d^order/dt^order x(t), order in 0..3 (or more)."""
        return self._eval(t, order=order)

    def _eval(self, t, order: int):
        t = np.asarray(t, dtype=float)
        k = np.arange(self.cos_coeffs.shape[0], dtype=float)
        a = self.cos_coeffs
        b = self.sin_coeffs
        # d/dt maps (a_k, b_k) -> (k b_k, -k a_k)
        for _ in range(order):
            a, b = (k[:, None] * b), (-k[:, None] * a)
        ct = np.cos(np.multiply.outer(t, k))
        st = np.sin(np.multiply.outer(t, k))
        return ct @ a + st @ b

    def speed(self, t):
        return np.linalg.norm(self.deriv(t, 1), axis=-1)

    def normal(self, t):
        """Outward unit normal (x2', -x1')/|x'| (counterclockwise curves)."""
        d = self.deriv(t, 1)
        n = np.stack([d[..., 1], -d[..., 0]], axis=-1)
        return n / np.linalg.norm(n, axis=-1, keepdims=True)

    def radius_of_influence(self) -> float:
        """Max distance from the constant term to the curve (size heuristic)."""
        t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        p = self.point(t) - self.cos_coeffs[0]
        return float(np.max(np.linalg.norm(p, axis=-1)))


@dataclass(frozen=True)
class ObstacleScene:
    """Disjoint union of closed curves (pairwise separation checked on grids)."""

    curves: tuple[ParametricCurve, ...]

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        t = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
        pts = [c.point(t) for c in self.curves]
        # sampled arc step bounds how closely a transversal crossing can hide
        steps = [float(np.max(np.linalg.norm(np.diff(p, axis=0), axis=-1)))
                 for p in pts]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = np.linalg.norm(pts[i][:, None, :] - pts[j][None, :, :], axis=-1)
                if np.min(d) <= 0.75 * max(steps[i], steps[j]):
                    raise ValueError(
                        f"curves {i} and {j} are not disjoint "
                        f"(min sampled distance {np.min(d):.3e})"
                    )
                if (_curve_contains(self.curves[j], pts[i][0])
                        or _curve_contains(self.curves[i], pts[j][0])):
                    raise ValueError(f"curves {i} and {j} are nested")

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)


@dataclass(frozen=True)
class QuadratureLayout:
    """Equispaced Nystroem nodes t_j = j*pi/mhalf with cached geometry.

    Concatenated over the scene's curves: ``points``, ``normals``, ``speeds``
    hold all K = 2*mhalf*len(scene) nodes; ``slices`` maps curve index to its
    range. ``weights`` are the arclength trapezoid weights (pi/mhalf)*speed.
    """

    scene: ObstacleScene
    mhalf: int
    nodes: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    speeds: np.ndarray
    slices: tuple[slice, ...]

    @property
    def weights(self) -> np.ndarray:
        return (np.pi / self.mhalf) * self.speeds

    @property
    def total_nodes(self) -> int:
        return self.points.shape[0]


def make_shape(kind: str, *, center=(0.0, 0.0), radius: float | None = None,
               semi_axes=(1.0, 0.5), scale: float | None = None,
               wobble: float = 0.12) -> ParametricCurve:
    """Build one of the library shapes.

    Parameterizations (all counterclockwise, t in [0, 2*pi)):

    * circle           center + radius*(cos t, sin t)
    * ellipse          center + (a cos t, b sin t), (a, b) = semi_axes
    * rounded_square   center + scale*(cos^3 t + cos t, sin^3 t + sin t),
                       default scale 0.25
    * rounded_triangle center + (radius + wobble*cos 3t)*(cos t, sin t),
                       defaults radius 0.8, wobble 0.12
    * kite             center + scale*(0.65 cos 2t + cos t - 0.65, 1.5 sin t),
                       default scale 0.5
    """
    cx, cy = float(center[0]), float(center[1])

    def coeffs(deg):
        return np.zeros((deg + 1, 2)), np.zeros((deg + 1, 2))

    if kind == "circle":
        r = 0.4 if radius is None else float(radius)
        if r <= 0:
            raise ValueError("circle radius must be > 0")
        a, b = coeffs(1)
        a[1, 0] = r
        b[1, 1] = r
        label = f"circle(r={r})"
    elif kind == "ellipse":
        ax, ay = map(float, semi_axes)
        if ax <= 0 or ay <= 0:
            raise ValueError("ellipse semi-axes must be > 0")
        a, b = coeffs(1)
        a[1, 0] = ax
        b[1, 1] = ay
        label = f"ellipse(a={ax},b={ay})"
    elif kind == "rounded_square":
        s = 0.25 if scale is None else float(scale)
        if s <= 0:
            raise ValueError("rounded_square scale must be > 0")
        a, b = coeffs(3)
        a[1, 0] = 1.75 * s   # cos^3 t + cos t = (7 cos t + cos 3t)/4
        a[3, 0] = 0.25 * s
        b[1, 1] = 1.75 * s   # sin^3 t + sin t = (7 sin t - sin 3t)/4
        b[3, 1] = -0.25 * s
        label = f"rounded_square(s={s})"
    elif kind == "rounded_triangle":
        r = 0.8 if radius is None else float(radius)
        w = float(wobble)
        if r <= 0:
            raise ValueError("rounded_triangle radius must be > 0")
        a, b = coeffs(4)
        a[1, 0] = r          # (r + w cos 3t) cos t = r cos t + w(cos 2t + cos 4t)/2
        a[2, 0] = 0.5 * w
        a[4, 0] = 0.5 * w
        b[1, 1] = r          # (r + w cos 3t) sin t = r sin t + w(sin 4t - sin 2t)/2
        b[2, 1] = -0.5 * w
        b[4, 1] = 0.5 * w
        label = f"rounded_triangle(r={r},w={w})"
    elif kind == "kite":
        s = 0.5 if scale is None else float(scale)
        if s <= 0:
            raise ValueError("kite scale must be > 0")
        a, b = coeffs(2)
        a[0, 0] = -0.65 * s
        a[1, 0] = s
        a[2, 0] = 0.65 * s
        b[1, 1] = 1.5 * s
        label = f"kite(s={s})"
    else:
        raise ValueError(f"unknown shape kind {kind!r}; known: {SHAPE_KINDS}")

    a[0, 0] += cx
    a[0, 1] += cy
    return ParametricCurve(label=label, cos_coeffs=a, sin_coeffs=b)


def outward_normal(curve: ParametricCurve, t):
    """Unit outward normal at parameter t (unit length to 1e-14)."""
    return curve.normal(t)


def _nearest_parameter(curve: ParametricCurve, z: np.ndarray) -> tuple[float, float]:
    """Distance to the curve and the minimizing parameter (Newton-refined)."""
    t = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
    p = curve.point(t)
    d2 = np.sum((p - z) ** 2, axis=-1)
    tk = float(t[np.argmin(d2)])
    for _ in range(30):
        x = curve.point(tk)
        dx = curve.deriv(tk, 1)
        ddx = curve.deriv(tk, 2)
        g = float(np.dot(x - z, dx))
        gp = float(np.dot(dx, dx) + np.dot(x - z, ddx))
        if gp <= 0:
            break
        step = g / gp
        tk -= step
        if abs(step) < 1e-15:
            break
    return float(np.linalg.norm(curve.point(tk) - z)), tk


def _winding_number(curve: ParametricCurve, z: np.ndarray, samples: int) -> int:
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    p = curve.point(t) - z
    ang = np.arctan2(p[:, 1], p[:, 0])
    dang = np.diff(np.concatenate([ang, ang[:1]]))
    dang = (dang + np.pi) % (2.0 * np.pi) - np.pi
    return int(np.rint(np.sum(dang) / (2.0 * np.pi)))


def _curve_contains(curve: ParametricCurve, z: np.ndarray) -> bool:
    dist, tstar = _nearest_parameter(curve, z)
    if dist <= 1e-9:
        return True  # boundary points belong to the closure
    size = max(curve.radius_of_influence(), 1e-12)
    if dist < 0.02 * size:
        # Too close for a sampled winding number; decide by the normal side.
        n = curve.normal(tstar)
        return bool(np.dot(z - curve.point(tstar), n) < 0.0)
    return _winding_number(curve, z, samples=4096) != 0


def contains(scene: ObstacleScene | ParametricCurve, z) -> bool:
    """Whether z lies in the closure of some obstacle (winding-number test)."""
    if isinstance(scene, ParametricCurve):
        scene = ObstacleScene((scene,))
    z = np.asarray(z, dtype=float)
    return any(_curve_contains(c, z) for c in scene)


def contains_many(scene: ObstacleScene | ParametricCurve, points) -> np.ndarray:
    """Vectorized `contains` for an (P, 2) array of query points.

    Points closer to a boundary than 2% of the curve size are re-checked by
    the scalar path (winding sums on coarse samples are unreliable there).
    """
    if isinstance(scene, ParametricCurve):
        scene = ObstacleScene((scene,))
    points = np.asarray(points, dtype=float)
    out = np.zeros(points.shape[0], dtype=bool)
    t = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    for curve in scene:
        samp = curve.point(t)
        rel = samp[None, :, :] - points[:, None, :]
        ang = np.arctan2(rel[:, :, 1], rel[:, :, 0])
        dang = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
        dang = (dang + np.pi) % (2.0 * np.pi) - np.pi
        winding = np.rint(np.sum(dang, axis=1) / (2.0 * np.pi)).astype(int)
        dist = np.min(np.linalg.norm(rel, axis=-1), axis=1)
        near = dist < 0.02 * max(curve.radius_of_influence(), 1e-12)
        inside = winding != 0
        if np.any(near):
            inside[near] = [_curve_contains(curve, p) for p in points[near]]
        out |= inside
    return out


def quadrature_layout(scene: ObstacleScene | ParametricCurve, mhalf: int) -> QuadratureLayout:
    """2*mhalf equispaced nodes per curve with cached positions/normals/speeds."""
    if isinstance(scene, ParametricCurve):
        scene = ObstacleScene((scene,))
    if mhalf < 8:
        raise ValueError("mhalf must be >= 8")
    t = np.arange(2 * mhalf) * (np.pi / mhalf)
    points, normals, speeds, slices = [], [], [], []
    offset = 0
    for c in scene:
        d1 = c.deriv(t, 1)
        sp = np.linalg.norm(d1, axis=-1)
        if np.any(sp <= 0):
            raise ValueError(f"curve {c.label} is not regular on the node grid")
        points.append(c.point(t))
        normals.append(np.stack([d1[:, 1], -d1[:, 0]], axis=-1) / sp[:, None])
        speeds.append(sp)
        slices.append(slice(offset, offset + 2 * mhalf))
        offset += 2 * mhalf
    return QuadratureLayout(
        scene=scene,
        mhalf=int(mhalf),
        nodes=t,
        points=np.concatenate(points, axis=0),
        normals=np.concatenate(normals, axis=0),
        speeds=np.concatenate(speeds, axis=0),
        slices=tuple(slices),
    )
