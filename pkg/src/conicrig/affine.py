"""Perturbation maps, affine fits, neighborhood affine rigidity and affine flexes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conic import quadric_from_parts
from .framework import Framework, FrameworkError
from .numerics import DEFAULT_TOL, Tolerance, column_space, matrix_rank, nullspace, sqrt_psd, symmetrize


def _coords(c) -> np.ndarray:
    if isinstance(c, Framework):
        return c.points
    pts = np.asarray(c, dtype=float)
    return pts[:, None] if pts.ndim == 1 else pts


@dataclass(frozen=True)
class PerturbationMap:
    """``x -> x + (x^T Q x) v``."""

    Q: np.ndarray
    v: np.ndarray

    def __init__(self, Q, v):
        Q = symmetrize(np.atleast_2d(Q))
        v = np.asarray(v, dtype=float).ravel()
        if not np.any(Q):
            raise ValueError("perturbation form must be nonzero")
        if not np.any(v):
            raise ValueError("perturbation direction must be nonzero")
        if Q.shape != (v.size, v.size):
            raise ValueError("form and direction dimensions differ")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "v", v)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        out = pts + np.einsum("ij,jk,ik->i", pts, self.Q, pts)[:, None] * self.v[None, :]
        return out if x.ndim > 1 else out[0]


def apply_perturbation(m: PerturbationMap, c, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Pointwise image of a framework's configuration (or of a point array).

    Coincident images are allowed; only loss of full affine span is an error.
    """
    pts = c.points if isinstance(c, Framework) else _coords(c)
    if pts.shape[1] != m.v.size:
        raise ValueError("dimension mismatch")
    q = m(pts)
    if matrix_rank(q - q.mean(axis=0), tol) < q.shape[1]:
        raise FrameworkError("perturbed configuration loses full affine span")
    return q


@dataclass(frozen=True)
class AffineMap:
    A: np.ndarray
    t: np.ndarray

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x @ self.A.T + self.t

    @classmethod
    def identity(cls, d: int) -> "AffineMap":
        return cls(np.eye(d), np.zeros(d))


def fit_affine(p, q) -> tuple[AffineMap, float]:
    """Least-squares affine map sending ``p`` onto ``q``, with the root residual."""
    P, Qc = _coords(p), _coords(q)
    if len(P) != len(Qc):
        raise ValueError("configurations have different vertex counts")
    X = np.column_stack([P, np.ones(len(P))])
    sol, *_ = np.linalg.lstsq(X, Qc, rcond=None)
    resid = float(np.linalg.norm(X @ sol - Qc))
    return AffineMap(sol[:-1].T.copy(), sol[-1].copy()), resid


def _fit_scale(q, tol: Tolerance) -> float:
    return tol.scale(max(1.0, float(np.linalg.norm(q)))) * 10


def is_affine_precongruent(p, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    Qc = _coords(q)
    _, resid = fit_affine(p, Qc)
    return resid <= _fit_scale(Qc, tol)


def is_neighborhood_preequivalent(f: Framework, q, tol: Tolerance = DEFAULT_TOL) -> bool:
    Qc = _coords(q)
    if len(Qc) != f.n:
        raise ValueError("vertex count mismatch")
    for i in range(f.n):
        nb = f.graph.closed_neighborhood(i)
        _, resid = fit_affine(f.points[nb], Qc[nb])
        if resid > _fit_scale(Qc[nb], tol):
            return False
    return True


def neighborhood_affine_space(f: Framework, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the n-vectors that are affine on every closed neighborhood."""
    n = f.n
    X = np.column_stack([f.points, np.ones(n)])
    blocks = []
    for i in range(n):
        nb = f.graph.closed_neighborhood(i)
        B = column_space(X[nb], tol)
        proj_c = np.eye(len(nb)) - B @ B.T
        C = np.zeros((len(nb), n))
        C[:, nb] = proj_c
        blocks.append(C)
    return nullspace(np.vstack(blocks), tol)


def is_neighborhood_affine_rigid(f: Framework, tol: Tolerance = DEFAULT_TOL) -> bool:
    return neighborhood_affine_space(f, tol).shape[1] == f.d + 1


def affine_flex_path(Q, t: float, tol: Tolerance = DEFAULT_TOL) -> AffineMap:
    """Linear map ``sqrt(I + tQ)``; preserves lengths of every e with e^T Q e = 0."""
    Q = symmetrize(np.atleast_2d(Q))
    d = Q.shape[0]
    M = np.eye(d) + t * Q
    lam = np.linalg.eigvalsh(M).min()
    if lam <= tol.scale(1.0):
        raise ValueError(f"I + tQ is not positive definite at t={t} (smallest eigenvalue {lam:.3g})")
    return AffineMap(sqrt_psd(M, tol), np.zeros(d))


def flex_framework(f: Framework, Q, t: float, tol: Tolerance = DEFAULT_TOL) -> Framework:
    a = affine_flex_path(Q, t, tol)
    return f.with_points(a(f.points))


def is_euclidean(a: AffineMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    A = np.asarray(a.A, dtype=float)
    gap = np.linalg.norm(A.T @ A - np.eye(A.shape[1]))
    return bool(gap <= tol.scale(1.0 + np.linalg.norm(A) ** 2) * 10)


def precongruence_quadric(Q, v, amap: AffineMap) -> np.ndarray:
    """Quadric carrying every vertex when ``m(p)`` is an affine image of ``p``.

    From ``(x^T Q x) v = (A - I) x + t`` dotted with v:
    ``x^T Q x - v^T (A - I) x / |v|^2 - v^T t / |v|^2 = 0``.
    """
    v = np.asarray(v, dtype=float)
    vv = v @ v
    Aprime = amap.A - np.eye(amap.A.shape[0])
    return quadric_from_parts(Q, -(v @ Aprime) / vv, -(v @ amap.t) / vv)
