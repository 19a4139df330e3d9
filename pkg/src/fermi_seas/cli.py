"""Command-line front end.

    fermi-seas entropy --h 0.5 --lambda 0,1.1,1.3 --L-geom 8:64:2048
    fermi-seas fit --h 0.5 --lambda "0,1.1,1.3,2/sqrt(3)" --window 200:2048
    fermi-seas collapse --transition kh-klambda --h 0.3,0.7 --L 300,600
    fermi-seas oracle --N 10 --h 0.5 --lambda 1.3 --L 1:5

Exit codes: 0 ok, 2 bad configuration, 3 numerical failure, 4 check failed,
5 degenerate oracle ground state.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .asymptotics import (EntropySeries, Transition, analytic_S0, collapse_spread,
                          fit_log_growth, geometric_grid, scaling_collapse)
from .entropy import entropy_series
from .errors import (DegenerateGroundState, DomainError, FermiSeasError,
                     InsufficientPoints, InvalidParameters, SpectrumOutOfRange)
from .oracle import Normalization, compare_methods
from .spectrum import ModelParams, classify_phase, fermi_seas

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_CHECK, EXIT_DEGENERATE = 0, 2, 3, 4, 5

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos,
          "asin": math.asin, "acos": math.acos}
_NAMES = {"pi": math.pi}


class ConfigError(ValueError):
    pass


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and len(node.args) == 1):
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ConfigError("unsupported expression")


def parse_number(text: str) -> float:
    """A float or a small arithmetic expression such as ``2/sqrt(3)``."""
    try:
        return _eval(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ConfigError, ZeroDivisionError, ValueError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc


def parse_values(text: str) -> list[float]:
    """Comma list of numbers or ``start:stop:count`` linear ranges."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        if len(parts) == 1:
            out.append(parse_number(item))
        elif len(parts) == 3:
            lo, hi = parse_number(parts[0]), parse_number(parts[1])
            n = int(parts[2])
            if n < 1:
                raise ConfigError(f"empty range {item!r}")
            out.extend(np.linspace(lo, hi, n).tolist())
        else:
            raise ConfigError(f"bad value spec {item!r}")
    if not out:
        raise ConfigError("empty value list")
    return out


def parse_sizes(text: str) -> list[int]:
    """Comma list of integers or inclusive ``a:b`` ranges."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        try:
            if len(parts) == 1:
                out.append(int(item))
            elif len(parts) == 2:
                out.extend(range(int(parts[0]), int(parts[1]) + 1))
            else:
                raise ValueError
        except ValueError as exc:
            raise ConfigError(f"bad size spec {item!r}") from exc
    if not out or min(out) < 1:
        raise ConfigError("block sizes must be >= 1")
    return out


def parse_geom(text: str) -> list[int]:
    """``min:count:max`` geometric grid of block sizes."""
    try:
        lo, n, hi = (int(s) for s in text.split(":"))
        return geometric_grid(lo, hi, n).tolist()
    except ValueError as exc:
        raise ConfigError(f"bad geometric grid {text!r}") from exc


def _threads() -> int:
    env = os.environ.get("FERMI_SEAS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _pmap(fn, items):
    """Order-preserving parallel map."""
    items = list(items)
    workers = min(_threads(), len(items))
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return v


def write_table(rows: list[dict], meta: dict, fmt: str, out) -> None:
    """CSV with ``#`` metadata lines, or JSON ``{"meta": ..., "rows": ...}``."""
    if fmt == "json":
        payload = {"meta": meta,
                   "rows": [{k: (float(_fmt(v)) if isinstance(v, (float, np.floating)) else v)
                             for k, v in r.items()} for r in rows]}
        out.write(json.dumps(payload, indent=1, sort_keys=False) + "\n")
        return
    for k, v in meta.items():
        out.write(f"# {k}: {json.dumps(v, sort_keys=True)}\n")
    if rows:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(v) for k, v in r.items()})
        out.write(buf.getvalue())


def _params(h, lam) -> ModelParams:
    try:
        return ModelParams(h, lam)
    except InvalidParameters as exc:
        raise ConfigError(str(exc)) from exc


def _grid(args) -> list[tuple[float, float]]:
    return [(h, lam) for h in parse_values(args.h) for lam in parse_values(args.lam)]


def cmd_entropy(args):
    Ls = parse_geom(args.L_geom) if args.L_geom else parse_sizes(args.L)
    points = [_params(h, lam) for h, lam in _grid(args)]
    scale = 1 / math.log(2) if args.log2 else 1.0

    def run(p):
        seas = fermi_seas(p)
        phase = classify_phase(p).name
        return [{"h": p.h, "lambda": p.lam, "L": v.L, "S": v.S * scale, "R": seas.R, "phase": phase}
                for v in entropy_series(p, Ls)]

    rows = [r for block in _pmap(run, points) for r in block]
    return rows, {"units": "bits" if args.log2 else "nats"}, EXIT_OK


def _self_test():
    Ls = geometric_grid(10, 5000, 40)
    a, b = 0.4321, -0.1234
    fit = fit_log_growth(EntropySeries(Ls, a * np.log(Ls) + 1.0 + b), window=(10, 5000))
    ok = abs(fit.a - a) < 1e-12 and abs(fit.b - (1.0 + b)) < 1e-12
    rows = [{"a_true": a, "b_true": 1.0 + b, "a": fit.a, "b": fit.b, "ok": int(ok)}]
    return rows, {"self_test": True}, EXIT_OK if ok else EXIT_CHECK


def cmd_fit(args):
    if args.self_test:
        return _self_test()
    if args.window:
        try:
            lo, hi = (int(s) for s in args.window.split(":"))
        except ValueError as exc:
            raise ConfigError(f"bad window {args.window!r}") from exc
    else:
        lo, hi = max(1, args.L_max // 10), args.L_max
    if not 1 <= lo < hi:
        raise ConfigError("window needs 1 <= L_min < L_max")
    Ls = geometric_grid(lo, hi, args.points)
    if not args.lam or not (args.h or args.symmetric_line):
        raise ConfigError("--h and --lambda are required (or --lambda with --symmetric-line)")
    if args.symmetric_line:
        points = [_params(1.0 / lam, lam) for lam in parse_values(args.lam)]
    else:
        points = [_params(h, lam) for h, lam in _grid(args)]

    def run(p):
        seas = fermi_seas(p)
        fit = fit_log_growth(EntropySeries.compute(p, Ls), window=(lo, hi))
        expected = 0.0 if seas.fermi_points == 0 else seas.R / 3
        row = {"h": p.h, "lambda": p.lam, "R": seas.R, "phase": classify_phase(p).name,
               "a": fit.a, "b": fit.b, "a_expected": expected,
               "L_min": fit.window[0], "L_max": fit.window[1],
               "residual": fit.residual, "residual_raw": fit.residual_raw}
        if args.symmetric_line:
            s0 = analytic_S0(p.lam)
            row.update({"S0_analytic": s0, "b_minus_S0": fit.b - s0})
        return row

    return _pmap(run, points), {"window": [lo, hi], "points": args.points}, EXIT_OK


def cmd_collapse(args):
    transition = Transition(args.transition)
    if transition is Transition.KH_ZERO:
        if not args.lam:
            raise ConfigError("--lambda anchors are required for the kh-0 transition")
        anchors = parse_values(args.lam)
    else:
        if not args.h:
            raise ConfigError("--h anchors are required for this transition")
        anchors = parse_values(args.h)
    Ls = parse_sizes(args.L)
    side = 1 if args.side == "phase1" else -1
    try:
        curves = scaling_collapse(anchors, Ls, transition, x_max=args.x_max,
                                  n_points=args.points, side=side)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    spread = collapse_spread(curves)
    rows = []
    for c in curves:
        for x, dS, p in zip(c.x, c.dS, c.params):
            rows.append({"transition": transition.value, "anchor": c.anchor, "h": p.h,
                         "lambda": p.lam, "L": c.L, "x": x, "S": dS + c.S_c,
                         "S_c": c.S_c, "dS": dS})
    meta = {"spread": float(_fmt(spread)), "tolerance": args.tolerance,
            "x_max": float(_fmt(curves[0].x[-1]))}
    return rows, meta, EXIT_OK if spread <= args.tolerance else EXIT_CHECK


def cmd_oracle(args):
    Ls = parse_sizes(args.L) if args.L else None
    if Ls and max(Ls) >= args.N:
        raise ConfigError("block sizes must be < N")
    scale = 1 / math.log(2) if args.log2 else 1.0
    rows = []
    worst = 0.0
    for h, lam in _grid(args):
        p = _params(h, lam)
        for r in compare_methods(args.N, p, Ls, Normalization(args.normalization), perturb=args.perturb):
            worst = max(worst, r.diff)
            rows.append({"N": r.N, "h": r.h, "lambda": r.lam, "L": r.L, "S_ed": r.S_ed * scale,
                         "S_corr": r.S_corr * scale, "diff": r.diff * scale, "offset": r.offset})
    meta = {"max_diff": float(_fmt(worst)), "tolerance": args.tolerance,
            "units": "bits" if args.log2 else "nats"}
    return rows, meta, EXIT_OK if worst <= args.tolerance else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermi-seas", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_h=True):
        p.add_argument("--h", required=need_h, help="field values: list, expressions, or a:b:n")
        p.add_argument("--lambda", dest="lam", required=need_h, help="driving-field values")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="output file (default stdout)")

    p = sub.add_parser("entropy", help="block entropy table")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--L", help="block sizes: list or inclusive a:b ranges")
    g.add_argument("--L-geom", dest="L_geom", help="geometric grid min:count:max")
    p.add_argument("--log2", action="store_true", help="report entropy in bits")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("fit", help="fit S_L = a ln L + b")
    common(p, need_h=False)
    p.add_argument("--window", help="fit window L_min:L_max")
    p.add_argument("--L-max", dest="L_max", type=int, default=2048,
                   help="upper window edge when --window is absent (lower edge L_max/10)")
    p.add_argument("--points", type=int, default=24, help="geometric grid points in the window")
    p.add_argument("--symmetric-line", action="store_true",
                   help="set h = 1/lambda and compare b with the closed-form constant")
    p.add_argument("--self-test", action="store_true", help="fit synthetic data and check recovery")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("collapse", help="finite-size scaling near a transition line")
    common(p, need_h=False)
    p.add_argument("--transition", choices=[t.value for t in Transition], default="kh-klambda")
    p.add_argument("--L", required=True)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--side", choices=("phase1", "phase2"), default="phase1",
                   help="which side of the k_h = k_lambda line to approach from")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("oracle", help="exact diagonalization versus correlation matrix")
    common(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--L", help="block sizes (default 1..N/2)")
    p.add_argument("--normalization", choices=[n.value for n in Normalization], default="spin-half")
    p.add_argument("--perturb", action="store_true",
                   help="retry a degenerate ground state with h shifted by a small amount")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--log2", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return parser


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, meta, code = args.func(args)
    except (ConfigError, InvalidParameters, InsufficientPoints, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateGroundState as exc:
        print(f"error: {exc}; rerun with --perturb or change N", file=sys.stderr)
        return EXIT_DEGENERATE
    except (SpectrumOutOfRange, FermiSeasError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    meta = {"version": __version__, "config": _config_echo(args), **meta}
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_table(rows, meta, args.format, fh)
    else:
        write_table(rows, meta, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
