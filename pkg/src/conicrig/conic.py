"""Conics at infinity, ruling quadrics and their classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .framework import Framework, edge_vectors
from .numerics import DEFAULT_TOL, SignatureTriple, Tolerance, eigen_signature, nullspace, rank_nullspace, symmetrize


def sym_basis(k: int) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the symmetric k x k matrices."""
    out = []
    for a in range(k):
        for b in range(a, k):
            S = np.zeros((k, k))
            if a == b:
                S[a, a] = 1.0
            else:
                S[a, b] = S[b, a] = 1.0 / np.sqrt(2.0)
            out.append(S)
    return out


def bilinear_rows(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row r evaluates ``left[r]^T S right[r]`` on the coordinates of ``sym_basis``."""
    k = left.shape[1]
    cols = []
    for a in range(k):
        for b in range(a, k):
            if a == b:
                cols.append(left[:, a] * right[:, a])
            else:
                cols.append((left[:, a] * right[:, b] + left[:, b] * right[:, a]) / np.sqrt(2.0))
    return np.column_stack(cols) if cols else np.zeros((len(left), 0))


def normalize_form(M) -> np.ndarray:
    """Unit Frobenius norm, first nonzero entry (row-major) positive."""
    M = symmetrize(M)
    nrm = np.linalg.norm(M)
    if nrm == 0:
        raise ValueError("form is zero")
    M = M / nrm
    flat = M.ravel()
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-12)[0]]
    return M if lead > 0 else -M


def _forms_from_coords(coords: np.ndarray, k: int) -> list[np.ndarray]:
    basis = sym_basis(k)
    return [normalize_form(sum(c * S for c, S in zip(col, basis))) for col in coords.T]


def conic_space(f: Union[Framework, np.ndarray], tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of {Q symmetric : e^T Q e = 0 for every edge vector e}.

    Accepts a framework or a raw array of edge vectors (one per row).
    An empty list means the edge directions do not lie on a conic at infinity.
    """
    ev = edge_vectors(f) if isinstance(f, Framework) else np.atleast_2d(np.asarray(f, dtype=float))
    d = ev.shape[1]
    if len(ev) == 0:
        return sym_basis(d)
    return _forms_from_coords(nullspace(bilinear_rows(ev, ev), tol), d)


def homogenize(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.column_stack([pts, np.ones(len(pts))])


def godsil_matrix(points, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    """Linear system whose solutions Q-hat make every vertex and every edge line lie on the quadric."""
    ph = homogenize(points)
    rows = [bilinear_rows(ph, ph)]
    if len(edges):
        ij = np.asarray(edges)
        rows.append(bilinear_rows(ph[ij[:, 0]], ph[ij[:, 1]]))
    return np.vstack(rows)


def ruling_space_of(points, edges, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return _forms_from_coords(nullspace(godsil_matrix(pts, edges), tol), pts.shape[1] + 1)


def ruling_quadric_space(f: Framework, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of homogeneous quadrics containing every vertex and every edge line."""
    return ruling_space_of(f.points, f.edges, tol)


def is_ruled(f: Framework, tol: Tolerance = DEFAULT_TOL) -> bool:
    return len(ruling_quadric_space(f, tol)) > 0


def quadric_from_parts(Q, l=None, c: float = 0.0) -> np.ndarray:
    """Homogeneous matrix of ``x^T Q x + l^T x + c``."""
    Q = symmetrize(np.atleast_2d(Q))
    d = Q.shape[0]
    l = np.zeros(d) if l is None else np.asarray(l, dtype=float)
    Qh = np.zeros((d + 1, d + 1))
    Qh[:d, :d] = Q
    Qh[:d, d] = Qh[d, :d] = l / 2.0
    Qh[d, d] = c
    return Qh


def evaluate(qhat, x) -> np.ndarray:
    """Value of the inhomogeneous quadric at one point or at each row of ``x``."""
    xh = homogenize(x)
    vals = np.einsum("ij,jk,ik->i", xh, np.asarray(qhat, dtype=float), xh)
    return vals if np.ndim(x) > 1 else vals[0]


@dataclass(frozen=True)
class ConePointSpace:
    base: np.ndarray
    directions: np.ndarray  # columns

    @property
    def dimension(self) -> int:
        return self.directions.shape[1]


EMPTY = "empty"
AT_INFINITY = "entirely at infinity"


@dataclass(frozen=True)
class QuadricClassification:
    rank: int
    signature: SignatureTriple
    is_smooth: bool
    cone_points: Union[ConePointSpace, str]
    indefinite: bool

    @property
    def full_span(self) -> bool:
        """Semidefinite forms cannot carry a full-span point set."""
        return self.indefinite


def classify_quadric(qhat, tol: Tolerance = DEFAULT_TOL) -> QuadricClassification:
    Qh = symmetrize(qhat)
    if not np.any(Qh):
        raise ValueError("quadric matrix is zero")
    d = Qh.shape[0] - 1
    sig = eigen_signature(Qh, tol)
    rank, K = rank_nullspace(Qh, tol)
    if K.shape[1] == 0:
        cone = EMPTY
    else:
        last = K[d, :]
        if np.linalg.norm(last) <= tol.scale(1.0) * 1e3:
            cone = AT_INFINITY
        else:
            base_h = K @ (last / (last @ last))
            inf = K @ nullspace(last[None, :], tol)
            cone = ConePointSpace(base_h[:d].copy(), inf[:d, :].copy())
    return QuadricClassification(
        rank=rank,
        signature=sig,
        is_smooth=rank == d + 1,
        cone_points=cone,
        indefinite=sig.negatives > 0 and sig.positives > 0,
    )


def _on_quadric_scale(qhat, x, tol: Tolerance) -> float:
    xh = homogenize(x)[0]
    return tol.scale(np.linalg.norm(qhat) * (xh @ xh)) * 10


def is_cone_point(qhat, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``x`` is a singular (cone) point of the quadric: Q-hat x-hat = 0."""
    Qh = symmetrize(qhat)
    x = np.asarray(x, dtype=float)
    if abs(evaluate(Qh, x)) > _on_quadric_scale(Qh, x, tol):
        raise ValueError("point is not on the quadric")
    xh = homogenize(x)[0]
    return bool(np.linalg.norm(Qh @ xh) <= tol.scale(np.linalg.norm(Qh) * np.linalg.norm(xh)) * 10)


def line_on_quadric(qhat, x1, x2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether the whole line through ``x1`` and ``x2`` lies on the quadric."""
    Qh = symmetrize(qhat)
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    e = x2 - x1
    if not np.any(e):
        raise ValueError("points coincide")
    d = len(x1)
    Q = Qh[:d, :d]
    ok1 = abs(evaluate(Qh, x1)) <= _on_quadric_scale(Qh, x1, tol)
    ok2 = abs(evaluate(Qh, x2)) <= _on_quadric_scale(Qh, x2, tol)
    ok_dir = abs(e @ Q @ e) <= tol.scale(np.linalg.norm(Qh) * (e @ e)) * 10
    return bool(ok1 and ok2 and ok_dir)


def line_samples(x1, x2, count: int = 10) -> np.ndarray:
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    t = np.linspace(-2.0, 3.0, count)
    return x1[None, :] + t[:, None] * (x2 - x1)[None, :]


def conic_restriction(qhat, tol: Tolerance = DEFAULT_TOL):
    """Quadratic part of the quadric, normalized, or None when it vanishes."""
    Qh = symmetrize(qhat)
    Q = Qh[:-1, :-1]
    if np.linalg.norm(Q) <= tol.scale(np.linalg.norm(Qh)):
        return None
    return normalize_form(Q)


def in_span(M, basis: list[np.ndarray], tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether matrix ``M`` lies in the span of ``basis`` (Frobenius residual test)."""
    M = np.asarray(M, dtype=float)
    if not basis:
        return not np.any(np.abs(M) > tol.absolute_floor)
    B = np.column_stack([b.ravel() for b in basis])
    coef, *_ = np.linalg.lstsq(B, M.ravel(), rcond=None)
    return bool(np.linalg.norm(B @ coef - M.ravel()) <= tol.scale(np.linalg.norm(M)) * 1e3)


def random_points_on_quadric(qhat, count: int, rng: np.random.Generator, spread: float = 2.0) -> np.ndarray:
    """Sample points of the real quadric by intersecting random lines with it."""
    Qh = symmetrize(qhat)
    d = Qh.shape[0] - 1
    out = []
    tries = 0
    while len(out) < count and tries < 200 * count:
        tries += 1
        z = rng.normal(scale=spread, size=d)
        u = rng.normal(size=d)
        zh, uh = np.append(z, 1.0), np.append(u, 0.0)
        a, b, c = uh @ Qh @ uh, 2 * (zh @ Qh @ uh), zh @ Qh @ zh
        if abs(a) < 1e-12:
            if abs(b) < 1e-12:
                continue
            out.append(z - c / b * u)
            continue
        disc = b * b - 4 * a * c
        if disc < 0:
            continue
        out.append(z + (-b + np.sqrt(disc)) / (2 * a) * u)
    return np.array(out).reshape(-1, d)


def is_cone_point_by_lines(qhat, x, rng: np.random.Generator, samples: int = 50,
                           tol: Tolerance = DEFAULT_TOL) -> bool:
    """Line-based cone point test: every sampled quadric point y spans a line inside the quadric."""
    Qh = symmetrize(qhat)
    x = np.asarray(x, dtype=float)
    ys = random_points_on_quadric(Qh, samples, rng)
    for y in ys:
        if np.linalg.norm(y - x) < 1e-9:
            continue
        vals = evaluate(Qh, line_samples(x, y))
        scale = np.linalg.norm(Qh) * (1 + np.max(np.abs(line_samples(x, y)))) ** 2
        if np.max(np.abs(vals)) > 1e-7 * scale:
            return False
    return True
