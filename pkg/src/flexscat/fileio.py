"""On-disk formats: far-field matrices, field CSVs, PGM heatmaps, manifests.

Everything is ASCII. Floats are written with repr(), the shortest decimal
that round-trips the IEEE double exactly (at most 17 significant digits), so
parse(serialize(x)) == x bit-for-bit and outputs diff cleanly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .forward import FarFieldMatrix
from .indicators import IndicatorField

__all__ = [
    "write_farfield",
    "read_farfield",
    "write_field",
    "read_field",
    "write_heatmap",
    "write_spectrum",
    "write_manifest",
]

FARFIELD_MAGIC = "BIHFAR1"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_farfield(path, f: FarFieldMatrix) -> None:
    """Write `BIHFAR1 <N> <kappa>` plus N rows of re/im interleaved entries.

    Row i holds entry (i, j) for j = 0..N-1 (column = incident direction).
    """
    n = f.n_directions
    lines = [f"{FARFIELD_MAGIC} {n} {_fmt(f.kappa)}"]
    for i in range(n):
        row = f.entries[i]
        lines.append(" ".join(f"{_fmt(v.real)} {_fmt(v.imag)}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_farfield(path) -> FarFieldMatrix:
    text = Path(path).read_text(encoding="ascii").strip().splitlines()
    head = text[0].split()
    if len(head) != 3 or head[0] != FARFIELD_MAGIC:
        raise ValueError(f"{path}: not a {FARFIELD_MAGIC} file")
    n, kappa = int(head[1]), float(head[2])
    if len(text) != n + 1:
        raise ValueError(f"{path}: expected {n} matrix rows, found {len(text) - 1}")
    entries = np.empty((n, n), dtype=complex)
    for i, line in enumerate(text[1:]):
        vals = np.array([float(v) for v in line.split()])
        if vals.size != 2 * n:
            raise ValueError(f"{path}: row {i} has {vals.size} values, expected {2 * n}")
        entries[i] = vals[0::2] + 1j * vals[1::2]
    return FarFieldMatrix(entries=entries, kappa=kappa)


def _is_count_field(field: IndicatorField) -> bool:
    return field.method in ("W3", "W4")


def write_field(path, field: IndicatorField) -> None:
    """CSV `x,y,value` in grid enumeration order (y outer, x inner)."""
    pts = field.grid.points()
    counts = _is_count_field(field)
    lines = ["x,y,value"]
    for (x, y), v in zip(pts, field.values):
        val = str(int(round(v))) if counts else _fmt(v)
        lines.append(f"{_fmt(x)},{_fmt(y)},{val}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_field(path) -> tuple[np.ndarray, np.ndarray]:
    rows = Path(path).read_text(encoding="ascii").strip().splitlines()
    if rows[0] != "x,y,value":
        raise ValueError(f"{path}: missing x,y,value header")
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    return data[:, :2], data[:, 2]


def write_heatmap(path, field: IndicatorField) -> None:
    """ASCII PGM (P2, maxval 65535) of the field; top row is y = ymax.

    gray = round(65535 (v - vmin)/(vmax - vmin)); constant fields map to 0.
    """
    g = field.grid
    img = field.values.reshape(g.ny, g.nx)
    vmin, vmax = float(np.min(img)), float(np.max(img))
    if vmax > vmin:
        gray = np.rint(65535.0 * (img - vmin) / (vmax - vmin)).astype(int)
    else:
        gray = np.zeros_like(img, dtype=int)
    gray = gray[::-1]  # row 0 of the PGM is ymax
    lines = ["P2", f"{g.nx} {g.ny}", "65535"]
    lines.extend(" ".join(str(v) for v in row) for row in gray)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def write_spectrum(path, values: np.ndarray) -> None:
    """CSV `index,value` of a diagnostic spectrum (descending as given)."""
    lines = ["index,value"]
    lines.extend(f"{j},{_fmt(v)}" for j, v in enumerate(np.asarray(values, float)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                          encoding="ascii")
