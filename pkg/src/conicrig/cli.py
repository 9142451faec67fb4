"""Command-line front end.

Framework-producing commands (gallery, flex, perturb, cone, slice, transform)
write a framework JSON file to ``-o`` or stdout. ``analyze`` and ``certify``
print a tab-delimited or JSON report. ``--emit-svg`` draws the relevant
framework alongside.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

import numpy as np

from . import __version__
from .affine import PerturbationMap, apply_perturbation, flex_framework
from .certify import SearchParams, analyze, is_super_stable
from .conic import conic_space
from .framework import Framework, FrameworkError
from .gallery import GENERATORS, generate
from .io import (certificate_dict, certificate_rows, dumps_framework, format_rows, read_framework,
                 report_dict, report_rows)
from .numerics import Tolerance
from .operations import ConeFramework, ProjectiveTransform, cone, is_flat, slice_cone, slide_to_flat, projective_transform


class CLIError(Exception):
    pass


def _numbers(text: str) -> np.ndarray:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise CLIError(f"could not parse numbers from {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--report", choices=("json", "text"), default="text", help="report format (default: text)")
    p.add_argument("--tol", type=float, default=1e-9, help="relative rank cutoff (default: 1e-9)")
    p.add_argument("--seed", type=int, default=0, help="seed for the PSD stress search")
    p.add_argument("--emit-svg", metavar="PATH", help="also draw the framework to this file")
    p.add_argument("-o", "--output", metavar="PATH", help="framework output file (default: stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="conicrig", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"conicrig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("analyze", "full analysis report"), ("certify", "super-stability certificate")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
        p.add_argument("--restarts", type=int, default=16)

    p = sub.add_parser("flex", parents=[common], help="apply the affine flex sqrt(I + tQ)")
    p.add_argument("file")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--conic-index", type=int, default=0)

    p = sub.add_parser("perturb", parents=[common], help="apply x -> x + (x^T Q x) v")
    p.add_argument("file")
    p.add_argument("--v", required=True, help="direction vector, comma separated")
    p.add_argument("--conic-index", type=int, default=0)

    p = sub.add_parser("cone", parents=[common], help="cone the framework into one dimension up")
    p.add_argument("file")
    p.add_argument("--height", type=float, default=1.0)

    p = sub.add_parser("slice", parents=[common], help="slice a flat cone framework (apex = vertex 0)")
    p.add_argument("file")
    p.add_argument("--flatten", action="store_true", help="slide onto the default hyperplane first")

    p = sub.add_parser("transform", parents=[common], help="apply a projective transform")
    p.add_argument("file")
    p.add_argument("--matrix", required=True, help="(d+1)^2 numbers, row-major")

    p = sub.add_parser("gallery", parents=[common], help="write a gallery framework")
    p.add_argument("name", choices=sorted(GENERATORS) + ["cone_of"])
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    return parser


def _emit_framework(f: Framework, args, out) -> None:
    text = dumps_framework(f)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _conic(f: Framework, index: int, tol: Tolerance) -> np.ndarray:
    conics = conic_space(f, tol)
    if not conics:
        raise CLIError("edge directions do not lie on a conic at infinity")
    if not 0 <= index < len(conics):
        raise CLIError(f"conic index {index} out of range (space has dimension {len(conics)})")
    return conics[index]


def _draw(f: Framework, path: str, title: str) -> None:
    from .plotting import draw_framework

    draw_framework(f, path, title=title)


def _run(args, out) -> int:
    tol = Tolerance(relative_cutoff=args.tol)
    cmd = args.command
    if cmd == "gallery":
        params = {}
        for item in args.param:
            if "=" not in item:
                raise CLIError(f"--param expects K=V, got {item!r}")
            k, v = item.split("=", 1)
            params[k.strip()] = v.strip()
        f = generate(args.name, **params)
        _emit_framework(f, args, out)
        if args.emit_svg:
            _draw(f, args.emit_svg, args.name)
        return 0

    f = read_framework(args.file)
    if cmd in ("analyze", "certify"):
        params = SearchParams(restarts=args.restarts)
        if cmd == "analyze":
            r = analyze(f, seed=args.seed, tol=tol, params=params)
            payload, rows = report_dict(r), report_rows(r)
        else:
            c = is_super_stable(f, seed=args.seed, tol=tol, params=params)
            payload, rows = certificate_dict(c), certificate_rows(c)
        if args.report == "json":
            out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            out.write(format_rows(rows))
        if args.emit_svg:
            _draw(f, args.emit_svg, cmd)
        return 0

    if cmd == "flex":
        g = flex_framework(f, _conic(f, args.conic_index, tol), args.t, tol)
    elif cmd == "perturb":
        v = _numbers(args.v)
        if v.size != f.d:
            raise CLIError(f"--v needs {f.d} components")
        q = apply_perturbation(PerturbationMap(_conic(f, args.conic_index, tol), v), f, tol)
        try:
            g = f.with_points(q)
        except FrameworkError as exc:
            raise CLIError(f"perturbed configuration is not a valid framework: {exc}") from exc
    elif cmd == "cone":
        g = cone(f, apex_height=args.height).framework
    elif cmd == "slice":
        cf = ConeFramework(f)
        if args.flatten and not is_flat(cf, tol):
            cf, _ = slide_to_flat(cf, tol=tol)
        g = slice_cone(cf, tol)
    elif cmd == "transform":
        vals = _numbers(args.matrix)
        if vals.size != (f.d + 1) ** 2:
            raise CLIError(f"--matrix needs {(f.d + 1) ** 2} numbers for a framework in E^{f.d}")
        g = projective_transform(f, ProjectiveTransform(vals.reshape(f.d + 1, f.d + 1), tol), tol)
    else:  # pragma: no cover - argparse restricts choices
        raise CLIError(f"unknown command {cmd}")
    _emit_framework(g, args, out)
    if args.emit_svg:
        _draw(g, args.emit_svg, cmd)
    return 0


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, out)
    except (CLIError, ValueError, OSError) as exc:
        err.write(f"conicrig {args.command}: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
