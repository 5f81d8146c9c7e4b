"""Dense complex linear algebra with deterministic spectral conventions.

LAPACK (via numpy/scipy) does the heavy lifting; this module pins down the
contracts the indicator code relies on: ascending eigenvalues, orthonormal
eigenvector columns with a deterministic phase (largest-modulus entry real
and nonnegative), singular systems through the Gram matrix F*F, and guarded
LU solves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "EigenSystem",
    "SingularSystem",
    "herm_eig",
    "singular_system",
    "herm_abs",
    "herm_sqrt_psd",
    "lu_solve",
]

HERMITICITY_TOL = 1e-10
PIVOT_TOL = 1e-14
RCOND_WARN = 1e-13


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues ascending; eigenvector columns orthonormal, phase-fixed."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class SingularSystem:
    """Singular values descending (>= 0) with right singular vector columns."""

    sigma: np.ndarray
    vectors: np.ndarray


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real nonnegative."""
    idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[idx, np.arange(vectors.shape[1])]
    mod = np.abs(lead)
    phase = np.where(mod > 0, lead / np.where(mod > 0, mod, 1.0), 1.0)
    return vectors * np.conj(phase)[None, :]


def herm_eig(a: np.ndarray) -> EigenSystem:
    """Eigendecomposition of a (numerically) Hermitian matrix.

    The input is Hermitized as (A + A*)/2 first; inputs violating
    ||A - A*||_F <= 1e-10 ||A||_F are rejected.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a)
    skew = np.linalg.norm(a - a.conj().T)
    if skew > HERMITICITY_TOL * max(norm, 1e-300):
        raise ValueError(
            f"matrix is not Hermitian: ||A - A*||_F = {skew:.3e} > "
            f"{HERMITICITY_TOL:.0e} * ||A||_F"
        )
    h = 0.5 * (a + a.conj().T)
    try:
        vals, vecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"Hermitian eigensolver failed to converge on a "
            f"{a.shape[0]}x{a.shape[1]} matrix (||A||_F = {norm:.3e})"
        ) from exc
    return EigenSystem(eigenvalues=vals, eigenvectors=_fix_phases(vecs))


def singular_system(f: np.ndarray) -> SingularSystem:
    """Singular values and right singular vectors via the Gram matrix F*F.

    sigma_j = sqrt(max(eig_j(F*F), 0)); precision below sqrt(eps)*sigma_max
    is lost by construction, which downstream regularization absorbs.
    """
    f = np.asarray(f)
    es = herm_eig(f.conj().T @ f)
    order = slice(None, None, -1)
    sigma = np.sqrt(np.maximum(es.eigenvalues[order], 0.0))
    return SingularSystem(sigma=sigma, vectors=es.eigenvectors[:, order])


def herm_abs(a: np.ndarray) -> np.ndarray:
    """Operator absolute value V |Lambda| V* of a Hermitian matrix."""
    es = herm_eig(a)
    b = (es.eigenvectors * np.abs(es.eigenvalues)[None, :]) @ es.eigenvectors.conj().T
    return 0.5 * (b + b.conj().T)


def herm_sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Operator square root of a Hermitian PSD matrix (tiny negatives clamped)."""
    es = herm_eig(a)
    floor = -HERMITICITY_TOL * max(np.linalg.norm(a), 1e-300)
    if np.min(es.eigenvalues) < floor:
        raise ValueError(
            f"matrix is not PSD: min eigenvalue {np.min(es.eigenvalues):.3e}"
        )
    lam = np.sqrt(np.maximum(es.eigenvalues, 0.0))
    b = (es.eigenvectors * lam[None, :]) @ es.eigenvectors.conj().T
    return 0.5 * (b + b.conj().T)


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B by partially pivoted LU.

    Raises LinAlgError when a pivot modulus falls below 1e-14 * max|A|;
    warns (scipy.linalg.LinAlgWarning) when the reciprocal condition
    estimate is below 1e-13.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    lu, piv = scipy.linalg.lu_factor(a)
    amax = np.max(np.abs(a)) if a.size else 0.0
    pivots = np.abs(np.diag(lu))
    if amax == 0.0 or np.min(pivots) < PIVOT_TOL * amax:
        raise np.linalg.LinAlgError(
            f"matrix is numerically singular (min pivot {np.min(pivots):.3e})"
        )
    gecon = scipy.linalg.get_lapack_funcs("gecon", (lu,))
    anorm = np.linalg.norm(a, 1)
    rcond, _ = gecon(lu, anorm)
    if rcond < RCOND_WARN:
        warnings.warn(
            f"ill-conditioned system: rcond estimate {rcond:.3e}",
            scipy.linalg.LinAlgWarning,
            stacklevel=2,
        )
    return scipy.linalg.lu_solve((lu, piv), b)
