"""Tolerance-aware dense linear algebra used by every rank decision."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Single numerical-rank policy shared by all modules.

    A singular value (or eigenvalue magnitude) counts as zero when it is at
    most ``max(relative_cutoff * largest, absolute_floor)``.
    """

    relative_cutoff: float = 1e-9
    absolute_floor: float = 1e-12

    def __post_init__(self):
        if not (self.relative_cutoff > 0 and self.absolute_floor > 0):
            raise ValueError("tolerance values must be strictly positive")
        if not self.relative_cutoff < 1:
            raise ValueError("relative_cutoff must be below 1")

    def scale(self, magnitude: float) -> float:
        """Zero threshold for quantities of the given magnitude."""
        return max(self.relative_cutoff * float(magnitude), self.absolute_floor)

    def scaled(self, factor: float) -> "Tolerance":
        return Tolerance(self.relative_cutoff * factor, self.absolute_floor * factor)


DEFAULT_TOL = Tolerance()


class SignatureTriple(NamedTuple):
    negatives: int
    zeros: int
    positives: int

    @property
    def rank(self) -> int:
        return self.negatives + self.positives


def _finite(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def symmetrize(M) -> np.ndarray:
    M = _finite(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return 0.5 * (M + M.T)


def rank_nullspace(M, tol: Tolerance = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Numerical rank and an orthonormal nullspace basis (as columns)."""
    M = _finite(M)
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    ncols = M.shape[1]
    if M.size == 0:
        return 0, np.eye(ncols)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    cutoff = tol.scale(s[0]) if s.size else tol.absolute_floor
    rank = int(np.sum(s > cutoff))
    return rank, vh[rank:].T.copy()


def nullspace(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    return rank_nullspace(M, tol)[1]


def matrix_rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    M = _finite(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol.scale(s[0])))


def column_space(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``M``."""
    M = _finite(M)
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol.scale(s[0])))
    return u[:, :r].copy()


def eigen_signature(M, tol: Tolerance = DEFAULT_TOL) -> SignatureTriple:
    """Counts of negative, zero and positive eigenvalues of a symmetric matrix."""
    w = np.linalg.eigvalsh(symmetrize(M))
    if w.size == 0:
        return SignatureTriple(0, 0, 0)
    cutoff = tol.scale(np.max(np.abs(w)))
    neg = int(np.sum(w < -cutoff))
    pos = int(np.sum(w > cutoff))
    return SignatureTriple(neg, w.size - neg - pos, pos)


def psd_project(M) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped)."""
    w, V = np.linalg.eigh(symmetrize(M))
    if np.all(w >= 0):
        return symmetrize(M)
    w = np.clip(w, 0.0, None)
    return (V * w) @ V.T


def sqrt_psd(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Symmetric PSD square root. Tiny negative eigenvalues are clamped."""
    w, V = np.linalg.eigh(symmetrize(M))
    if w.size == 0:
        return np.zeros_like(w).reshape(0, 0)
    if w.min() < -tol.scale(np.max(np.abs(w))):
        raise ValueError(f"matrix is not PSD (smallest eigenvalue {w.min():.3g})")
    r = np.sqrt(np.clip(w, 0.0, None))
    R = (V * r) @ V.T
    return 0.5 * (R + R.T)
