"""Framework JSON files and report serialization."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .certify import AnalysisReport, SuperStabilityCertificate
from .framework import Framework, FrameworkError


def _num(x: float) -> str:
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return f"{x:.1f}"
    return format(x, ".17g")


def dumps_framework(f: Framework) -> str:
    """JSON text with 17 significant digits per coordinate (bit-exact round trip)."""
    verts = ",\n    ".join("[" + ", ".join(_num(v) for v in row) + "]" for row in f.points)
    edges = ", ".join(f"[{i}, {j}]" for i, j in f.edges)
    return (
        "{\n"
        f'  "dimension": {f.d},\n'
        f'  "vertices": [\n    {verts}\n  ],\n'
        f'  "edges": [{edges}]\n'
        "}\n"
    )


def loads_framework(text: str, full_span: bool = True) -> Framework:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameworkError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    for key in ("dimension", "vertices", "edges"):
        if key not in data:
            raise FrameworkError(f"framework file is missing key {key!r}")
    d = int(data["dimension"])
    if any(len(v) != d for v in data["vertices"]):
        raise FrameworkError(f"every vertex must have {d} coordinates")
    pts = np.array(data["vertices"], dtype=float).reshape(-1, d) if data["vertices"] else np.zeros((0, d))
    return Framework.from_edges(pts, [tuple(e) for e in data["edges"]], full_span=full_span)


def write_framework(f: Framework, path) -> None:
    Path(path).write_text(dumps_framework(f), encoding="utf-8")


def read_framework(path, full_span: bool = True) -> Framework:
    return loads_framework(Path(path).read_text(encoding="utf-8"), full_span=full_span)


def _matrix(M):
    return None if M is None else [[float(v) for v in row] for row in np.asarray(M)]


def certificate_dict(c: SuperStabilityCertificate) -> dict:
    return {
        "verdict": c.verdict,
        "stress_rank": c.stress_rank,
        "target_rank": c.target_rank,
        "generic_rank": c.generic_rank,
        "witness_signature": list(c.witness_signature) if c.witness_signature is not None else None,
        "min_eigenvalue": c.min_eigenvalue,
        "witness_stress": _matrix(c.witness_stress),
        "witness_conic": _matrix(c.witness_conic),
    }


def report_dict(r: AnalysisReport) -> dict:
    return {
        "n": r.n,
        "d": r.d,
        "has_conic": r.has_conic,
        "is_ruled": r.is_ruled,
        "is_nar": r.is_nar,
        "conic_dim": r.conic_dim,
        "ruling_dim": r.ruling_dim,
        "stress_space_dim": r.stress_space_dim,
        "max_generic_stress_rank": r.max_generic_stress_rank,
        "psd_stress_rank": r.psd_stress_rank,
        "super_stability": certificate_dict(r.super_stability),
        "sap": r.sap,
        "consistency_flags": [
            {"name": fl.name, "applicable": fl.applicable, "passed": fl.passed} for fl in r.consistency_flags
        ],
    }


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def report_rows(r: AnalysisReport) -> list[tuple[str, str]]:
    c = r.super_stability
    rows = [
        ("n", r.n), ("d", r.d),
        ("has_conic", r.has_conic), ("is_ruled", r.is_ruled), ("is_nar", r.is_nar),
        ("stress_space_dim", r.stress_space_dim),
        ("max_generic_stress_rank", r.max_generic_stress_rank),
        ("psd_stress_rank", r.psd_stress_rank),
        ("target_rank", c.target_rank),
        ("super_stability", c.verdict),
        ("sap", r.sap),
    ]
    rows += [(f"flag:{fl.name}", "pass" if fl.passed else "FAIL") for fl in r.consistency_flags]
    return [(k, _cell(v)) for k, v in rows]


def certificate_rows(c: SuperStabilityCertificate) -> list[tuple[str, str]]:
    rows = [
        ("verdict", c.verdict), ("stress_rank", c.stress_rank), ("target_rank", c.target_rank),
        ("generic_rank", c.generic_rank),
        ("witness_signature", "/".join(map(str, c.witness_signature)) if c.witness_signature else None),
        ("min_eigenvalue", c.min_eigenvalue),
    ]
    return [(k, _cell(v)) for k, v in rows]


def format_rows(rows) -> str:
    return "".join(f"{k}\t{v}\n" for k, v in rows)
