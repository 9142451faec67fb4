"""Super-stability certificates, PSD stress search, SAP test and the analysis report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .affine import is_neighborhood_affine_rigid
from .conic import conic_space, ruling_quadric_space, ruling_space_of
from .framework import Framework, assemble_stress, stress_space_weights
from .numerics import DEFAULT_TOL, SignatureTriple, Tolerance, eigen_signature, psd_project, rank_nullspace

SUPER_STABLE = "super_stable"
FAILS_CONIC = "fails_conic"
FAILS_STRESS = "fails_stress"
UNDETERMINED = "undetermined"


@dataclass
class SearchParams:
    restarts: int = 16
    max_iter: int = 10_000
    step_tol: float = 1e-12


class _StressSpace:
    """Frobenius-orthonormal basis of the stress space, for projection."""

    def __init__(self, f: Framework, tol: Tolerance):
        W = stress_space_weights(f, tol)
        self.n = f.n
        mats = [assemble_stress(f.graph, W[:, k]) for k in range(W.shape[1])]
        if mats:
            q, _ = np.linalg.qr(np.column_stack([m.ravel() for m in mats]))
            self.V = q
        else:
            self.V = np.zeros((f.n * f.n, 0))

    @property
    def dim(self) -> int:
        return self.V.shape[1]

    def project(self, X: np.ndarray) -> np.ndarray:
        Y = (self.V @ (self.V.T @ X.ravel())).reshape(self.n, self.n)
        return 0.5 * (Y + Y.T)

    def random_unit(self, rng: np.random.Generator) -> np.ndarray:
        c = rng.normal(size=self.dim)
        Y = (self.V @ (c / np.linalg.norm(c))).reshape(self.n, self.n)
        return 0.5 * (Y + Y.T)


def _alternate(space: _StressSpace, X: np.ndarray, params: SearchParams) -> np.ndarray:
    """Normalized alternating projections between the stress space and the PSD cone."""
    for _ in range(params.max_iter):
        Y = space.project(psd_project(X))
        nrm = np.linalg.norm(Y)
        if nrm < 1e-14:
            return np.zeros_like(X)
        Y /= nrm
        if np.linalg.norm(Y - X) < params.step_tol:
            return Y
        X = Y
    return X


def _is_psd(M: np.ndarray, tol: Tolerance) -> bool:
    w = np.linalg.eigvalsh(M)
    return bool(w.min() >= -tol.scale(np.max(np.abs(w))))


def psd_search(f: Framework, seed: int = 0, params: SearchParams = None,
               tol: Tolerance = DEFAULT_TOL) -> tuple[Optional[np.ndarray], list[np.ndarray]]:
    """Averaged witness plus the individual converged PSD stresses, in restart order."""
    params = params or SearchParams()
    space = _StressSpace(f, tol)
    if space.dim == 0:
        return None, []
    rng = np.random.default_rng(seed)
    kept = []
    for _ in range(params.restarts):
        X = _alternate(space, space.random_unit(rng), params)
        if np.any(X) and _is_psd(X, tol):
            kept.append(X)
    if not kept:
        return None, []
    avg = space.project(sum(kept) / len(kept))
    return avg / np.linalg.norm(avg), kept


def find_max_rank_psd_stress(f: Framework, seed: int = 0, params: SearchParams = None,
                             tol: Tolerance = DEFAULT_TOL) -> Optional[np.ndarray]:
    """PSD equilibrium stress of the largest rank the search can find, or None."""
    return psd_search(f, seed, params, tol)[0]


def generic_stress_rank(f: Framework, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of a random combination of the stress basis (the generic maximum)."""
    W = stress_space_weights(f, tol)
    if W.shape[1] == 0:
        return 0
    rng = np.random.default_rng(seed + 7919)
    omega = assemble_stress(f.graph, W @ rng.normal(size=W.shape[1]))
    return eigen_signature(omega, tol).rank


@dataclass
class SuperStabilityCertificate:
    verdict: str
    stress_rank: int
    target_rank: int
    generic_rank: int
    witness_stress: Optional[np.ndarray] = field(default=None, repr=False)
    witness_conic: Optional[np.ndarray] = field(default=None, repr=False)
    witness_signature: Optional[SignatureTriple] = None
    min_eigenvalue: Optional[float] = None


def is_super_stable(f: Framework, seed: int = 0, tol: Tolerance = DEFAULT_TOL,
                    params: SearchParams = None) -> SuperStabilityCertificate:
    target = f.n - f.d - 1
    witness = find_max_rank_psd_stress(f, seed, params, tol)
    generic = generic_stress_rank(f, seed, tol)
    conics = conic_space(f, tol)
    sig = eigen_signature(witness, tol) if witness is not None else None
    rank = sig.rank if sig is not None else 0
    if generic < target:
        verdict = FAILS_STRESS
    elif conics:
        verdict = FAILS_CONIC
    elif rank == target:
        verdict = SUPER_STABLE
    else:
        verdict = UNDETERMINED
    return SuperStabilityCertificate(
        verdict=verdict,
        stress_rank=rank,
        target_rank=target,
        generic_rank=generic,
        witness_stress=witness,
        witness_conic=conics[0] if conics else None,
        witness_signature=sig,
        min_eigenvalue=float(np.linalg.eigvalsh(witness).min()) if witness is not None else None,
    )


class SAPError(ValueError):
    pass


def kernel_framework(omega, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Coordinates (n x d) of a framework spanning the kernel of a stress together with 1."""
    omega = np.asarray(omega, dtype=float)
    n = omega.shape[0]
    _, K = rank_nullspace(0.5 * (omega + omega.T), tol)
    ones = np.ones(n) / np.sqrt(n)
    if np.linalg.norm(ones - K @ (K.T @ ones)) > 1e-6:
        raise SAPError("the all-ones vector is not in the kernel; not a stress matrix")
    d = K.shape[1] - 1
    if d < 1:
        raise SAPError(f"kernel dimension {K.shape[1]} does not fit rank n-d-1 for any d >= 1")
    centered = K - np.outer(ones, ones @ K)
    u, _, _ = np.linalg.svd(centered, full_matrices=False)
    return u[:, :d] * np.sqrt(n)


def support_edges(omega, tol: Tolerance = DEFAULT_TOL) -> list[tuple[int, int]]:
    omega = np.asarray(omega, dtype=float)
    cut = tol.scale(np.max(np.abs(omega)))
    n = omega.shape[0]
    return [(i, j) for i in range(n) for j in range(i + 1, n) if abs(omega[i, j]) > cut]


def sap_test(omega, tol: Tolerance = DEFAULT_TOL,
             edges: Sequence[tuple[int, int]] = None) -> bool:
    """True when the stress has the Strong Arnold Property.

    SAP fails exactly when some nonzero symmetric (d+1)x(d+1) matrix kills
    every kernel vertex and every edge pair of the kernel framework. ``edges``
    defaults to the support of ``omega``.
    """
    P = kernel_framework(omega, tol)
    edges = support_edges(omega, tol) if edges is None else list(edges)
    return len(ruling_space_of(P, edges, tol)) == 0


@dataclass
class ConsistencyFlag:
    name: str
    applicable: bool
    passed: bool


@dataclass
class AnalysisReport:
    n: int
    d: int
    has_conic: bool
    is_ruled: bool
    is_nar: bool
    stress_space_dim: int
    max_generic_stress_rank: int
    psd_stress_rank: Optional[int]
    super_stability: SuperStabilityCertificate
    sap: Union[bool, str]
    consistency_flags: list[ConsistencyFlag]
    conic_dim: int = 0
    ruling_dim: int = 0

    @property
    def all_consistent(self) -> bool:
        return all(flag.passed for flag in self.consistency_flags)


NOT_APPLICABLE = "not_applicable"


def analyze(f: Framework, seed: int = 0, tol: Tolerance = DEFAULT_TOL,
            params: SearchParams = None) -> AnalysisReport:
    conics = conic_space(f, tol)
    rulings = ruling_quadric_space(f, tol)
    has_conic, ruled = bool(conics), bool(rulings)
    nar = is_neighborhood_affine_rigid(f, tol)
    stress_dim = stress_space_weights(f, tol).shape[1]
    cert = is_super_stable(f, seed, tol, params)
    target = f.n - f.d - 1
    psd_rank = cert.stress_rank if cert.witness_stress is not None else None

    full_rank_stress = None
    if psd_rank == target:
        full_rank_stress = cert.witness_stress
    elif cert.generic_rank == target and stress_dim:
        W = stress_space_weights(f, tol)
        rng = np.random.default_rng(seed + 7919)
        full_rank_stress = assemble_stress(f.graph, W @ rng.normal(size=W.shape[1]))
    sap = sap_test(full_rank_stress, tol, f.edges) if full_rank_stress is not None and target >= 0 else NOT_APPLICABLE

    flags = [
        ConsistencyFlag("nar-cycle", nar, (not nar) or has_conic == ruled),
        ConsistencyFlag("generic-rank-cycle", cert.generic_rank == target,
                        cert.generic_rank != target or has_conic == ruled),
        ConsistencyFlag("sap-cycle", sap != NOT_APPLICABLE,
                        sap == NOT_APPLICABLE or (sap == (not ruled) == (not has_conic))),
        ConsistencyFlag("ruled-implies-conic", True, (not ruled) or has_conic),
    ]
    return AnalysisReport(
        n=f.n, d=f.d, has_conic=has_conic, is_ruled=ruled, is_nar=nar,
        stress_space_dim=stress_dim, max_generic_stress_rank=cert.generic_rank,
        psd_stress_rank=psd_rank, super_stability=cert, sap=sap,
        consistency_flags=flags, conic_dim=len(conics), ruling_dim=len(rulings),
    )
