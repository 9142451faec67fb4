"""Exact rational oracles, independent of the floating-point code paths.

Every function here rebuilds its linear system from scratch over the
rationals with sympy and reads dimensions from exact nullspaces.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy as sp


def _rat(x):
    return sp.Rational(Fraction(x).limit_denominator(10**9))


def stress_dim(points, edges) -> int:
    n, d = len(points), len(points[0])
    rows = []
    for i in range(n):
        for k in range(d):
            row = []
            for a, b in edges:
                if i == a:
                    row.append(_rat(points[a][k]) - _rat(points[b][k]))
                elif i == b:
                    row.append(_rat(points[b][k]) - _rat(points[a][k]))
                else:
                    row.append(0)
            rows.append(row)
    return len(edges) - sp.Matrix(rows).rank()


def stress_generators(points, edges) -> list[sp.Matrix]:
    n, d = len(points), len(points[0])
    rows = []
    for i in range(n):
        for k in range(d):
            rows.append([
                (_rat(points[a][k]) - _rat(points[b][k])) if i == a else
                (_rat(points[b][k]) - _rat(points[a][k])) if i == b else 0
                for a, b in edges
            ])
    out = []
    for w in sp.Matrix(rows).nullspace():
        M = sp.zeros(n, n)
        for (a, b), val in zip(edges, w):
            M[a, b] = M[b, a] = val
        for i in range(n):
            M[i, i] = -sum(M[i, j] for j in range(n) if j != i)
        out.append(M)
    return out


def _sym_monomials(k):
    return list(itertools.combinations_with_replacement(range(k), 2))


def _bilinear_row(x, y, k):
    return [x[a] * y[b] + (x[b] * y[a] if a != b else 0) if a != b else x[a] * y[a] for a, b in _sym_monomials(k)]


def conic_dim(points, edges) -> int:
    d = len(points[0])
    rows = []
    for a, b in edges:
        e = [_rat(points[b][k]) - _rat(points[a][k]) for k in range(d)]
        rows.append(_bilinear_row(e, e, d))
    unknowns = d * (d + 1) // 2
    return unknowns - (sp.Matrix(rows).rank() if rows else 0)


def ruling_dim(points, edges) -> int:
    d = len(points[0])
    hat = [[_rat(v) for v in p] + [sp.Integer(1)] for p in points]
    rows = [_bilinear_row(h, h, d + 1) for h in hat]
    rows += [_bilinear_row(hat[a], hat[b], d + 1) for a, b in edges]
    return (d + 1) * (d + 2) // 2 - sp.Matrix(rows).rank()


def nar_dim(points, edges) -> int:
    """Dimension of {z : z is affine on every closed neighborhood}, by exact elimination.

    z is affine on a vertex set S iff z|S lies in the column span of [P|1]|S,
    i.e. z|S is orthogonal to the left nullspace of [P|1]|S.
    """
    n, d = len(points), len(points[0])
    rows = []
    for i in range(n):
        nb = sorted({i} | {b for a, b in edges if a == i} | {a for a, b in edges if b == i})
        X = sp.Matrix([[_rat(points[j][k]) for k in range(d)] + [1] for j in nb])
        for y in X.T.nullspace():
            row = [0] * n
            for pos, j in enumerate(nb):
                row[j] = y[pos]
            rows.append(row)
    return n - (sp.Matrix(rows).rank() if rows else 0)


def signature(M: sp.Matrix) -> tuple[int, int, int]:
    """Exact inertia via an LDL^T-free route: signs of the characteristic polynomial roots."""
    lam = sp.symbols("lam")
    poly = sp.Poly(M.charpoly(lam).as_expr(), lam)
    roots = sp.real_roots(poly)
    neg = sum(1 for r in roots if r < 0)
    zero = sum(1 for r in roots if r == 0)
    pos = sum(1 for r in roots if r > 0)
    return neg, zero, pos
