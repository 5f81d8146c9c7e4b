"""Reconstruction indicators from far-field data.

Factorization indicators (grid of sampling points z, test vector phi_z):

    W1(z) = [ sum_j |lam_1j| / (alpha + |lam_1j|^2) |(phi_z, psi_1j)|^2 ]^-1,
    W2(z) = likewise with the eigensystem of F_# = |Re F| + |Im F|,

where (lam_1j, psi_1j) is the eigensystem of (F*F)^(1/4), i.e. lam_1j =
sqrt(sigma_j) with the right singular vectors of F, and lam_2j = sqrt(mu_j)
with the eigensystem (mu_j, w_j) of F_#. Large values flag points inside the
obstacle. Inner products conjugate the second argument: (a, b) = sum a_k
conj(b_k) (only |.|^2 enters, but the convention is frozen here and in the
tests).

Monotonicity indicators: with the probing Gram matrix of plane waves on the
circle of diameter h around z,

    T_B[i, j] = (2 pi/N) pi h e^{i kappa z.(d_j - d_i)}
                J0((kappa h / 2) |d_i - d_j|),

W3(z) counts eigenvalues > delta of Re F + T_B (clamped obstacles) and W4(z)
those of -Re F + T_B (free obstacles). Small counts flag interior points.

The test vector is phi_z(d) = e^{-i kappa d.z} (convention "negative", the
default, matching the range characterization the indicators rest on); the
opposite sign e^{+i kappa d.z} is available as convention "positive".
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import special as _sp

from . import linalg
from .forward import FarFieldMatrix
from .grid import Grid

__all__ = [
    "TestVector",
    "ProbeMatrix",
    "IndicatorField",
    "test_vector",
    "fsharp",
    "fm_field",
    "probe_gram",
    "mm_field",
    "SMALL_LAMBDA_CUTOFF",
]

Convention = Literal["negative", "positive"]

# With alpha = 0, spectral terms below this fraction of the largest lambda
# are dropped instead of divided by.
SMALL_LAMBDA_CUTOFF = 1e-14


@dataclass(frozen=True)
class TestVector:
    """Samples phi_z(d_j) with unit-modulus entries."""

    values: np.ndarray
    z: np.ndarray
    convention: Convention


@dataclass(frozen=True)
class ProbeMatrix:
    """Hermitian PSD Gram matrix of plane waves on the probe circle."""

    entries: np.ndarray
    z: np.ndarray
    h: float
    kappa: float


@dataclass(frozen=True)
class IndicatorField:
    """One indicator value per grid point plus method metadata."""

    grid: Grid
    values: np.ndarray
    method: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.grid.n_points,):
            raise ValueError("value count must equal the grid point count")


def test_vector(z, kappa: float, directions: np.ndarray,
                convention: Convention = "negative") -> TestVector:
    """Test vector phi_z on the direction grid; see module docstring."""
    z = np.asarray(z, dtype=float)
    if convention not in ("negative", "positive"):
        raise ValueError(f"unknown convention {convention!r}")
    sign = -1.0 if convention == "negative" else 1.0
    return TestVector(values=np.exp(sign * 1j * kappa * (directions @ z)),
                      z=z, convention=convention)


def fsharp(f: FarFieldMatrix | np.ndarray) -> np.ndarray:
    """F_# = |Re F| + |Im F| (operator absolute values); Hermitian PSD."""
    m = f.entries if isinstance(f, FarFieldMatrix) else np.asarray(f)
    re = 0.5 * (m + m.conj().T)
    im = (m - m.conj().T) / 2j
    return linalg.herm_abs(re) + linalg.herm_abs(im)


def _spectral_data(f: FarFieldMatrix, variant: str):
    if variant == "W1":
        ss = linalg.singular_system(f.entries)
        return np.sqrt(ss.sigma), ss.vectors
    if variant == "W2":
        es = linalg.herm_eig(fsharp(f))
        mu = np.maximum(es.eigenvalues[::-1], 0.0)
        return np.sqrt(mu), es.eigenvectors[:, ::-1]
    raise ValueError(f"unknown factorization variant {variant!r}")


def fm_field(f: FarFieldMatrix, grid: Grid, alpha: float = 0.0,
             variant: str = "W1", convention: Convention = "negative") -> IndicatorField:
    """Factorization-method indicator field on a sampling grid.

    alpha >= 0 is the spectral regularization; with alpha = 0 terms whose
    lambda falls below SMALL_LAMBDA_CUTOFF * lambda_max are dropped.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    lam, psi = _spectral_data(f, variant)
    lam_max = np.max(lam)
    if lam_max <= 0 or np.all(lam < SMALL_LAMBDA_CUTOFF * lam_max):
        raise ValueError("degenerate far-field matrix: all spectral values ~ 0")
    if alpha == 0.0:
        keep = lam >= SMALL_LAMBDA_CUTOFF * lam_max
        weights = 1.0 / lam[keep]
        psi = psi[:, keep]
    else:
        weights = lam / (alpha + lam**2)
    if convention not in ("negative", "positive"):
        raise ValueError(f"unknown convention {convention!r}")
    dirs = f.directions()
    sign = -1.0 if convention == "negative" else 1.0
    phi = np.exp(sign * 1j * f.kappa * (dirs @ grid.points().T))  # (N, P)
    # (phi_z, psi_j) with conjugation on the second argument = psi^H phi
    proj = np.abs(psi.conj().T @ phi) ** 2                         # (modes, P)
    values = 1.0 / (weights @ proj)
    return IndicatorField(grid=grid, values=values, method=variant,
                          params={"alpha": alpha, "convention": convention})


def probe_gram(z, h: float, kappa: float, directions: np.ndarray) -> ProbeMatrix:
    """Discrete probing matrix T_B for the ball of diameter h centered at z."""
    if h <= 0:
        raise ValueError("probe diameter h must be > 0")
    z = np.asarray(z, dtype=float)
    n = directions.shape[0]
    gaps = np.linalg.norm(directions[:, None, :] - directions[None, :, :], axis=-1)
    base = (2.0 * np.pi / n) * np.pi * h * _sp.j0(0.5 * kappa * h * gaps)
    phase = np.exp(1j * kappa * (directions @ z))
    return ProbeMatrix(entries=np.conj(phase)[:, None] * base * phase[None, :],
                       z=z, h=h, kappa=kappa)


def mm_field(f: FarFieldMatrix, grid: Grid, h: float, delta: float = 0.0,
             bc: str = "dirichlet", n_threads: int = 1) -> IndicatorField:
    """Monotonicity-method eigenvalue counts over a sampling grid.

    Counts eigenvalues strictly above the threshold delta of
    Re F + T_B(z) (bc="dirichlet", W3) or -Re F + T_B(z) (bc="neumann", W4).
    """
    if delta < 0:
        raise ValueError("threshold delta must be >= 0")
    if bc not in ("dirichlet", "neumann"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    sign = 1.0 if bc == "dirichlet" else -1.0
    m = f.entries
    re_f = sign * 0.5 * (m + m.conj().T)
    dirs = f.directions()
    n = f.n_directions
    gaps = np.linalg.norm(dirs[:, None, :] - dirs[None, :, :], axis=-1)
    base = (2.0 * np.pi / n) * np.pi * h * _sp.j0(0.5 * f.kappa * h * gaps)
    pts = grid.points()
    phases = np.exp(1j * f.kappa * (pts @ dirs.T))  # (P, N)

    def count_chunk(chunk: slice) -> np.ndarray:
        p = phases[chunk]
        t_b = np.conj(p)[:, :, None] * base[None, :, :] * p[:, None, :]
        vals = np.linalg.eigvalsh(re_f[None, :, :] + t_b)
        return np.sum(vals > delta, axis=-1)

    chunks = [slice(i, min(i + 256, pts.shape[0])) for i in range(0, pts.shape[0], 256)]
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            counts = list(pool.map(count_chunk, chunks))
    else:
        counts = [count_chunk(c) for c in chunks]
    values = np.concatenate(counts).astype(float)
    method = "W3" if bc == "dirichlet" else "W4"
    return IndicatorField(grid=grid, values=values, method=method,
                          params={"h": h, "delta": delta, "bc": bc})
