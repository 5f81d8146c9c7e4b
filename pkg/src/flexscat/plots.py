"""Matplotlib report figures for indicator fields.

The CSV/PGM outputs are the canonical data products; the PNG written here is
the human-facing report, a filled contour of the indicator with the true
boundaries dashed on top (the usual way these reconstructions are shown).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import ObstacleScene
from .indicators import IndicatorField

__all__ = ["render_field"]


def render_field(path, field: IndicatorField, scene: ObstacleScene | None = None) -> None:
    g = field.grid
    z = field.values.reshape(g.ny, g.nx)
    fig, ax = plt.subplots(figsize=(4.8, 4.0), constrained_layout=True)
    if field.method in ("W3", "W4"):
        m = ax.pcolormesh(g.xs(), g.ys(), z, shading="nearest", cmap="viridis")
    else:
        m = ax.contourf(g.xs(), g.ys(), z, levels=40, cmap="viridis")
    fig.colorbar(m, ax=ax, shrink=0.9)
    if scene is not None:
        t = np.linspace(0.0, 2.0 * np.pi, 400)
        for curve in scene:
            p = curve.point(t)
            ax.plot(p[:, 0], p[:, 1], "w--", lw=1.2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(field.method)
    fig.savefig(path, dpi=150)
    plt.close(fig)
