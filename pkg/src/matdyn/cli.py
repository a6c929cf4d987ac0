"""Command-line interface.

Every subcommand writes deterministic CSV (or JSON lines / PPM) to stdout or
to ``--output``. Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Iterable, Sequence

from . import basin, periodic, quat, raster
from .acceptance import DEFAULT_SEED, run_all
from .core import Mat2
from .errors import MatdynError
from .maps import (
    DetOneSlice, DetZeroSlice, HenonLift, PasanLift, PhiDiag, PhiId, PhiJordan, PhiPower,
    PhiTheta, SigmaC, SqPhiId, SqSigmaC, SqZeta, ZetaLambda, orbit,
)


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(w) for w in text.split(",")] if text else []
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} numbers, got {text!r}")
    return vals


def _complex(text: str) -> complex:
    re, im = _floats(text, 2)
    return complex(re, im)


def parse_map(text: str):
    name, _, args = text.partition(":")
    try:
        match name:
            case "phi-id":
                return PhiId()
            case "phi-pow":
                re, im, d = _floats(args, 3)
                if d != int(d):
                    raise UsageError("phi-pow degree must be an integer")
                return PhiPower(complex(re, im), int(d))
            case "phi-diag":
                return PhiDiag(_complex(args))
            case "phi-jordan":
                return PhiJordan()
            case "sigma-c":
                return SigmaC(_complex(args))
            case "zeta":
                return ZetaLambda(_complex(args))
            case "pasan":
                return PasanLift()
            case "henon":
                return HenonLift()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown map {text!r}")


def parse_planar(text: str):
    name, _, args = text.partition(":")
    try:
        match name:
            case "sq-phi-id":
                return SqPhiId()
            case "sq-sigma-c":
                return SqSigmaC(_complex(args))
            case "sq-zeta":
                return SqZeta()
            case "det0":
                return DetZeroSlice(_floats(args, 1)[0])
            case "det1":
                return DetOneSlice(_floats(args, 1)[0])
            case "phi-theta":
                return PhiTheta(_floats(args, 1)[0])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown planar map {text!r}")


def parse_matrix(text: str) -> Mat2:
    return Mat2.from_reals(_floats(text, 8))


def _parse_point(text: str, spec):
    vals = _floats(text)
    if len(vals) == 2:
        return (vals[0], vals[1])
    if len(vals) == 4 and not isinstance(spec, (DetZeroSlice, DetOneSlice, PhiTheta)):
        return (complex(vals[0], vals[1]), complex(vals[2], vals[3]))
    raise UsageError("planar point is 2 reals (or 4 reals for complex skeleton maps)")


def _complex_reals(w) -> list[float]:
    w = complex(w)
    return [w.real, w.imag]


def emit(out, header: Sequence[str], rows: Iterable[Sequence], form: str):
    if form == "json":
        for row in rows:
            out.write(json.dumps({k: (v if not isinstance(v, float) or math.isfinite(v) else fmt(v))
                                  for k, v in zip(header, row)}) + "\n")
        return
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


MATRIX_COLUMNS = ["x_re", "x_im", "y_re", "y_im", "z_re", "z_im", "t_re", "t_im"]


# ---- subcommands -------------------------------------------------------------

def cmd_orbit(args, out):
    if (args.map is None) == (args.planar is None):
        raise UsageError("give exactly one of --map or --planar")
    if args.map is not None:
        spec = parse_map(args.map)
        if args.m is None:
            raise UsageError("--m is required with --map")
        seed = parse_matrix(args.m)
    else:
        spec = parse_planar(args.planar)
        if args.p is None:
            raise UsageError("--p is required with --planar")
        seed = _parse_point(args.p, spec)
    rec = orbit(spec, seed, args.steps, args.escape_r, args.conv_eps)
    if args.map is not None:
        header = ["step"] + MATRIX_COLUMNS
        rows = [[k] + pt.reals() for k, pt in enumerate(rec.points)]
    else:
        header = ["step", "p1_re", "p1_im", "p2_re", "p2_im"]
        rows = [[k] + _complex_reals(pt[0]) + _complex_reals(pt[1]) for k, pt in enumerate(rec.points)]
    emit(out, header, rows, args.format)
    print(f"verdict {rec.verdict}", file=sys.stderr)


def cmd_periodic(args, out):
    spec = parse_map(args.map)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if isinstance(spec, PhiId):
        points = periodic.periodic_phi_id(args.n)
    elif isinstance(spec, PhiDiag):
        points = periodic.periodic_phi_diag(spec.lam, args.n, args.tol)
    elif isinstance(spec, PhiJordan):
        points = periodic.periodic_phi_jordan(args.n, args.tol)
    else:
        raise UsageError("periodic supports phi-id, phi-diag and phi-jordan")
    expand = _floats(args.expand) if args.expand else []
    rows = []
    for p in points:
        pts = [p.point]
        if p.free_entry and expand:
            m = p.point
            pts = [Mat2(m.x, s, m.z, m.t) if p.free_entry == "y" else Mat2(m.x, m.y, s, m.t)
                   for s in expand]
        for m in pts:
            rows.append([p.period, p.family] + m.reals()
                        + [periodic.cycle_residual(spec, m, args.n), p.free_entry or ""])
    emit(out, ["period", "family"] + MATRIX_COLUMNS + ["residual", "free_entry"], rows, args.format)


def cmd_basin(args, out):
    rows = []
    for text in args.m:
        m = parse_matrix(text)
        v = basin.basin_classify_phi_id(m, args.tol)
        inv = m.x + m.t, m.x * m.t - m.y * m.z
        tag = basin.classify_lambda_set(m, args.tol) or "None"
        rows.append([v.tag, v.max_eig_modulus, v.min_eig_modulus, tag, basin.sigma_residual(*inv)])
    emit(out, ["verdict", "max_modulus", "min_modulus", "lambda_tag", "sigma_residual"], rows, args.format)


def cmd_render(args, out):
    spec = parse_planar(args.planar)
    control = raster.ControlTriple(args.escape_r, args.window, args.kappa)
    grid = raster.render(spec, control, args.px, args.py or args.px,
                         "UnitDisk" if args.disk else "Square", args.workers)
    if args.out == "ppm":
        data = raster.grid_to_ppm(grid, args.kappa)
        _write_bytes(args.output, data)
        return
    emit(out, ["ix", "iy", "x", "y", "value"], raster.grid_rows(grid), args.out)


def cmd_segment(args, out):
    lines = raster.iterate_segment(args.theta, args.x1, args.iters, args.refine, args.samples)
    rows = ([k, i, float(p[0]), float(p[1])] for k, line in enumerate(lines) for i, p in enumerate(line))
    emit(out, ["polyline", "index", "x1", "x2"], rows, args.out)


def cmd_quat(args, out):
    if args.quat_cmd == "fixed":
        pts = quat.phi_theta_fixed_points(args.theta)
    elif args.quat_cmd == "two-periodic":
        pts = quat.phi_theta_two_periodic(args.theta).points
    else:
        v = _complex(args.v)
        w = quat.t_n_lambda(args.lam, v, args.n)
        emit(out, ["n", "re", "im", "modulus"], [[args.n, w.real, w.imag, abs(w)]], args.format)
        return
    rows = [[cp.tag, float(cp.point[0]), float(cp.point[1]), cp.in_disk] for cp in pts]
    emit(out, ["tag", "x1", "x2", "in_disk"], rows, args.format)


def cmd_selftest(args, out):
    failed = 0
    for result in run_all(args.seed):
        out.write(result.line() + "\n")
        failed += not result.passed
    return 1 if failed else 0


def _write_bytes(path, data: bytes):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


# ---- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matdyn", description="Dynamics of rational maps on 2x2 complex matrices.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    def text_format(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("orbit", help="iterate a map from a seed")
    p.add_argument("--map", help="matrix map, e.g. phi-id or phi-diag:2,0")
    p.add_argument("--planar", help="planar map, e.g. det0:1 or phi-theta:0.5")
    p.add_argument("--m", help="seed matrix as 8 reals x.re,x.im,y.re,y.im,z.re,z.im,t.re,t.im")
    p.add_argument("--p", help="seed point for --planar, 2 reals (or 4 for complex)")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--escape-r", type=float, default=1e6)
    p.add_argument("--conv-eps", type=float, default=1e-12)
    text_format(p)
    p.set_defaults(handler=cmd_orbit)

    p = sub.add_parser("periodic", help="closed-form periodic points")
    p.add_argument("--map", required=True, help="phi-id, phi-diag:re,im or phi-jordan")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--expand", help="comma-separated values for the free entry of line families")
    text_format(p)
    p.set_defaults(handler=cmd_periodic)

    p = sub.add_parser("basin", help="classify matrices against the basin of 0")
    p.add_argument("--m", action="append", required=True, help="matrix as 8 reals; repeatable")
    p.add_argument("--tol", type=float, default=1e-9)
    text_format(p)
    p.set_defaults(handler=cmd_basin)

    p = sub.add_parser("render", help="exit-time image of a planar map")
    p.add_argument("--planar", required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--escape-r", type=float, required=True)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--px", type=int, required=True)
    p.add_argument("--py", type=int, help="image height (defaults to --px)")
    p.add_argument("--disk", action="store_true", help="mask pixels outside the unit disk")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", choices=["ppm", "csv", "json"], default="ppm")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("segment", help="iterated images of a vertical chord under phi_theta")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--x1", type=float, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--refine", type=float, default=1e-2)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.set_defaults(handler=cmd_segment)

    p = sub.add_parser("quat", help="quaternionic catalog")
    qsub = p.add_subparsers(dest="quat_cmd", required=True)
    for name in ("fixed", "two-periodic"):
        q = qsub.add_parser(name)
        q.add_argument("--theta", type=float, required=True)
        text_format(q)
        q.set_defaults(handler=cmd_quat)
    q = qsub.add_parser("tn")
    q.add_argument("--lambda", dest="lam", type=float, required=True)
    q.add_argument("--v", required=True, help="re,im")
    q.add_argument("--n", type=int, required=True)
    text_format(q)
    q.set_defaults(handler=cmd_quat)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(handler=cmd_selftest, output=None)
    return parser


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--m -1,0,...`` as ``--m=-1,0,...`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt and nxt.startswith("-") and len(nxt) > 1 \
                and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    path = getattr(args, "output", None)
    binary = getattr(args, "out", None) == "ppm"
    try:
        if path and not binary:
            with open(path, "w", newline="\n") as fh:
                code = args.handler(args, fh)
        else:
            code = args.handler(args, sys.stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_help(sys.stderr)
        return 2
    except (MatdynError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.flush()
    return code or 0


def main() -> None:
    sys.exit(run())
