"""Uniform sampling grids for indicator fields.

Points are enumerated row-major with y as the outer loop and x inner, so the
first point is (xmin, ymin) and the last (xmax, ymax); both endpoints are
included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Grid", "make_grid"]


@dataclass(frozen=True)
class Grid:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    @property
    def n_points(self) -> int:
        return self.nx * self.ny

    def xs(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    def points(self) -> np.ndarray:
        """All grid points, shape (nx*ny, 2), y-outer/x-inner order."""
        xx, yy = np.meshgrid(self.xs(), self.ys(), indexing="xy")
        return np.stack([xx.ravel(), yy.ravel()], axis=-1)

    def shifted(self, t) -> "Grid":
        tx, ty = float(t[0]), float(t[1])
        return Grid(self.xmin + tx, self.xmax + tx,
                    self.ymin + ty, self.ymax + ty, self.nx, self.ny)


def make_grid(bounds, nx: int, ny: int) -> Grid:
    """Uniform grid over bounds = (xmin, xmax, ymin, ymax), corners included."""
    xmin, xmax, ymin, ymax = map(float, bounds)
    if nx < 2 or ny < 2:
        raise ValueError("grid resolution must be at least 2x2")
    if xmax <= xmin or ymax <= ymin:
        raise ValueError("degenerate grid bounds")
    return Grid(xmin, xmax, ymin, ymax, int(nx), int(ny))
