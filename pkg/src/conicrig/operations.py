"""Coning, sliding, slicing and projective maps, with stress transport under each.

Cone frameworks keep the apex at vertex index 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framework import Framework, FrameworkError, Graph, check_stress
from .numerics import DEFAULT_TOL, Tolerance


class OperationError(ValueError):
    pass


@dataclass(frozen=True)
class ConeFramework:
    framework: Framework
    apex: int = 0

    def __post_init__(self):
        f = self.framework
        if self.apex != 0:
            raise OperationError("the apex must be vertex 0")
        nbrs = set(f.graph.neighbors(0))
        if nbrs != set(range(1, f.n)):
            raise OperationError("apex is not adjacent to every other vertex")

    @property
    def apex_point(self) -> np.ndarray:
        return self.framework.points[0]

    @property
    def base_points(self) -> np.ndarray:
        return self.framework.points[1:]

    @property
    def n(self) -> int:
        """Number of non-apex vertices."""
        return self.framework.n - 1


def _base_edges(cf: ConeFramework) -> list[tuple[int, int]]:
    return [(i - 1, j - 1) for i, j in cf.framework.edges if i != 0]


def cone(f: Framework, apex_height: float = 1.0, apex_base=None) -> ConeFramework:
    """Place E^d at height 0 in E^{d+1} and join a new apex to every vertex.

    The apex sits above the centroid unless ``apex_base`` (a point of E^d) is given.
    """
    if apex_height == 0:
        raise OperationError("apex height must be nonzero")
    base = f.points.mean(axis=0) if apex_base is None else np.asarray(apex_base, dtype=float)
    pts = np.vstack([np.append(base, apex_height), np.column_stack([f.points, np.zeros(f.n)])])
    edges = [(0, i + 1) for i in range(f.n)] + [(i + 1, j + 1) for i, j in f.edges]
    return ConeFramework(Framework(Graph(f.n + 1, edges), pts))


def _check_scales(cf: ConeFramework, s) -> np.ndarray:
    s = np.asarray(s, dtype=float).ravel()
    if s.size != cf.n:
        raise OperationError(f"expected {cf.n} slide scales, got {s.size}")
    if np.any(s == 0) or not np.all(np.isfinite(s)):
        raise OperationError("slide scales must be finite and nonzero")
    return s


def slide(cf: ConeFramework, s) -> ConeFramework:
    """Move vertex i to ``p0 + s_i (p_i - p0)`` along its apex ray."""
    s = _check_scales(cf, s)
    p0 = cf.apex_point
    q = p0 + s[:, None] * (cf.base_points - p0)
    return ConeFramework(cf.framework.with_points(np.vstack([p0, q])))


def default_hyperplane(cf: ConeFramework) -> tuple[np.ndarray, float]:
    """Best-fit hyperplane of the base vertices, shifted to miss the apex by 10% of the diameter."""
    base = cf.base_points
    c = base.mean(axis=0)
    _, _, vh = np.linalg.svd(base - c)
    a = vh[-1]
    b = float(a @ c)
    diam = float(np.max(np.linalg.norm(base[:, None, :] - base[None, :, :], axis=-1)))
    gap = float(a @ cf.apex_point) - b
    if abs(gap) < 0.1 * diam:
        b = float(a @ cf.apex_point) - (np.sign(gap) or 1.0) * 0.1 * diam
    return a, b


def slide_to_flat(cf: ConeFramework, hyperplane=None, tol: Tolerance = DEFAULT_TOL):
    """Slide every base vertex onto ``{x : a.x = b}``; returns the flat cone and the scales."""
    a, b = default_hyperplane(cf) if hyperplane is None else hyperplane
    a = np.asarray(a, dtype=float)
    if a.size != cf.framework.d or not np.any(a):
        raise OperationError("hyperplane normal has the wrong size or is zero")
    p0 = cf.apex_point
    scale = np.linalg.norm(a) * max(1.0, float(np.max(np.abs(cf.framework.points))))
    lift = float(b) - a @ p0
    if abs(lift) <= tol.scale(scale) * 10:
        raise OperationError("hyperplane contains the apex")
    rays = (cf.base_points - p0) @ a
    if np.any(np.abs(rays) <= tol.scale(scale) * 10):
        raise OperationError("an apex ray is parallel to the hyperplane")
    s = lift / rays
    return slide(cf, s), s


def flatness_residual(cf: ConeFramework) -> tuple[float, float]:
    """(base-vertex distance from their best hyperplane, apex distance from it)."""
    base = cf.base_points
    c = base.mean(axis=0)
    _, sv, vh = np.linalg.svd(base - c)
    a = vh[-1]
    off = float(np.max(np.abs((base - c) @ a)))
    return off, float(abs((cf.apex_point - c) @ a))


def is_flat(cf: ConeFramework, tol: Tolerance = DEFAULT_TOL) -> bool:
    off, apex_gap = flatness_residual(cf)
    size = max(1.0, float(np.max(np.abs(cf.framework.points))))
    return off <= tol.scale(size) * 100 and apex_gap > tol.scale(size) * 100


def slice_cone(cf: ConeFramework, tol: Tolerance = DEFAULT_TOL) -> Framework:
    """Drop the apex of a flat cone and express the base in hyperplane coordinates."""
    if not is_flat(cf, tol):
        raise OperationError("cone framework is not flat")
    base = cf.base_points
    c = base.mean(axis=0)
    _, _, vh = np.linalg.svd(base - c)
    U = vh[:-1].T
    coords = (base - c) @ U
    return Framework(Graph(cf.n, _base_edges(cf)), coords, tol=tol)


# -- stress transport -------------------------------------------------------


def _augment(psi: np.ndarray) -> np.ndarray:
    """Add an apex row/column (index 0) so that the all-ones vector is in the kernel."""
    n = psi.shape[0]
    col = -psi.sum(axis=1)
    out = np.zeros((n + 1, n + 1))
    out[1:, 1:] = psi
    out[1:, 0] = col
    out[0, 1:] = col
    out[0, 0] = -col.sum()
    return out


def _require_equilibrium(omega, f: Framework, tol: Tolerance, what: str):
    if not check_stress(omega, f, tol).is_equilibrium:
        raise OperationError(f"stress is not in equilibrium for the {what}")


def transport_stress_slide(omega, cf: ConeFramework, s, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Equilibrium stress of ``slide(cf, s)`` with the rank and signature of ``omega``.

    Equilibrium is translation invariant, so working with the apex at the
    origin needs no explicit coordinate change here.
    """
    s = _check_scales(cf, s)
    omega = np.asarray(omega, dtype=float)
    _require_equilibrium(omega, cf.framework, tol, "cone framework")
    psi = omega[1:, 1:]
    S = 1.0 / s
    return _augment(S[:, None] * psi * S[None, :])


def cone_stress(omega) -> np.ndarray:
    """Zero-pad a stress with an apex row and column at index 0."""
    omega = np.asarray(omega, dtype=float)
    out = np.zeros((omega.shape[0] + 1, omega.shape[0] + 1))
    out[1:, 1:] = omega
    return out


def slice_stress(omega, cf: ConeFramework = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Drop the (numerically zero) apex row and column of a flat-cone stress."""
    omega = np.asarray(omega, dtype=float)
    if cf is not None:
        if not is_flat(cf, tol):
            raise OperationError("cone framework is not flat")
        _require_equilibrium(omega, cf.framework, tol, "cone framework")
    size = max(float(np.max(np.abs(omega))), 0.0) if omega.size else 0.0
    if np.max(np.abs(omega[0])) > tol.scale(size) * 1e3:
        raise OperationError("apex row of the stress is not zero")
    return omega[1:, 1:].copy()


@dataclass(frozen=True)
class ProjectiveTransform:
    H: np.ndarray

    def __init__(self, H, tol: Tolerance = DEFAULT_TOL):
        H = np.asarray(H, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 2:
            raise OperationError("projective matrix must be square of size d+1 >= 2")
        if abs(np.linalg.det(H)) <= tol.scale(np.linalg.norm(H) ** H.shape[0]):
            raise OperationError("projective matrix is singular")
        object.__setattr__(self, "H", H)

    @property
    def d(self) -> int:
        return self.H.shape[0] - 1


def _homogeneous_weights(f: Framework, h: ProjectiveTransform, tol: Tolerance) -> np.ndarray:
    if h.d != f.d:
        raise OperationError(f"transform acts on E^{h.d}, framework lives in E^{f.d}")
    xh = np.column_stack([f.points, np.ones(f.n)])
    w = xh @ h.H[-1]
    reach = np.linalg.norm(h.H[-1]) * np.linalg.norm(xh, axis=1)
    bad = np.flatnonzero(np.abs(w) <= np.array([tol.scale(r) for r in reach]) * 1e3)
    if bad.size:
        raise OperationError(f"vertex {int(bad[0])} is sent to infinity")
    return w


def projective_transform(f: Framework, h: ProjectiveTransform, tol: Tolerance = DEFAULT_TOL) -> Framework:
    _homogeneous_weights(f, h, tol)
    img = np.column_stack([f.points, np.ones(f.n)]) @ h.H.T
    return f.with_points(img[:, :-1] / img[:, -1:], tol=tol)


def transport_stress_projective(omega, f: Framework, h: ProjectiveTransform,
                                tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Carry a stress through cone -> linear map -> slide to the hyperplane -> slice.

    The cone uses the homogeneous model: apex at the origin of R^{d+1}, vertex
    i at (p_i, 1). Linear maps fix the apex and preserve equilibrium, and the
    slide back to the last-coordinate-one hyperplane uses scales 1 / w_i.
    """
    w = _homogeneous_weights(f, h, tol)
    omega = np.asarray(omega, dtype=float)
    _require_equilibrium(omega, f, tol, "framework")
    coned = cone(f, apex_height=-1.0, apex_base=np.zeros(f.d))
    om_cone = cone_stress(omega)
    rel = coned.framework.points - coned.apex_point
    moved = ConeFramework(coned.framework.with_points(rel @ h.H.T))
    flat, s = slide_to_flat(moved, (np.eye(f.d + 1)[-1], 1.0), tol)
    om_flat = transport_stress_slide(om_cone, moved, s, tol)
    return slice_stress(om_flat, flat, tol)
