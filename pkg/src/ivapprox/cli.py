"""Command-line front end.

Exit codes: 0 success, 1 bad input or configuration, 2 the pipeline ran
but could not deliver (NotMonotone, CoverTooLarge, FitBudgetExceeded, or
an error that is not certified below the target), 3 a verified law failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from . import bump, catalog
from .errors import (
    BudgetInfeasible,
    CoverTooLarge,
    FitBudgetExceeded,
    IVAError,
    NotMonotone,
    SearchExhausted,
)
from .functions import Grid, IntervalFunction, default_grid_size, parse_function

SCHEMA_VERSION = 1
MIN_GRID = 11
SWEEP_NS = (4, 8, 16, 32)
# failures that mean "the method cannot deliver here", not "bad input"
PIPELINE_FAILURES = (NotMonotone, CoverTooLarge, FitBudgetExceeded, BudgetInfeasible, SearchExhausted)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.floating):
        return _jsonable(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(_jsonable(doc), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _parse_domain(text: str) -> tuple[float, float]:
    try:
        a, b = (float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--domain expects 'a,b', got {text!r}") from None
    if not a < b:
        raise UsageError(f"--domain needs a < b, got {text!r}")
    return a, b


def function_from_args(args) -> IntervalFunction:
    if args.fn is not None:
        if args.lower is not None or args.upper is not None:
            raise UsageError("use either --fn or --lower/--upper, not both")
        try:
            return catalog.get(args.fn)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    if args.lower is None or args.upper is None:
        raise UsageError("a function needs --fn NAME or both --lower and --upper")
    domain = _parse_domain(args.domain or "0,1")
    f = parse_function(args.lower, args.upper, domain, lipschitz_bound=args.lipschitz)
    source = dict(f.source)
    if args.lipschitz is not None:
        source["lipschitz"] = args.lipschitz
    object.__setattr__(f, "source", source)
    return f


def function_from_source(source: dict) -> IntervalFunction:
    if "catalog" in source:
        return catalog.get(source["catalog"])
    f = parse_function(source["lower"], source["upper"], tuple(source["domain"]),
                       lipschitz_bound=source.get("lipschitz"))
    object.__setattr__(f, "source", dict(source))
    return f


def _grid_size(args) -> int:
    n = args.grid if args.grid is not None else default_grid_size()
    if n < MIN_GRID:
        raise UsageError(f"--grid must be at least {MIN_GRID}, got {n}")
    return n


def _overlay_rows(f, g, xs, with_dh: bool = False):
    flo, fhi = f.sample(xs)
    glo, ghi = g.sample(xs)
    cols = [xs, flo, fhi, glo, ghi]
    if with_dh:
        cols.append(np.maximum(np.abs(flo - glo), np.abs(fhi - ghi)))
    return list(zip(*cols))


def _write_model(path: Optional[str], model_doc: dict) -> None:
    if path:
        _emit(dumps(model_doc), path)


def cmd_approximate(args) -> int:
    if not args.eps > 0:
        raise UsageError(f"--eps must be positive, got {args.eps!r}")
    if args.method == "jackson" and (args.n is None or args.n < 1):
        raise UsageError("approximate jackson needs --n >= 1")
    f = function_from_args(args)
    gsize = _grid_size(args)
    grid = Grid.uniform(f.domain[0], f.domain[1], gsize)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "approximate",
        "method": args.method,
        "function": f.source,
        "epsilon": args.eps,
        "grid": gsize,
    }
    try:
        model, g, target = _run_method(args, f, grid, report)
    except PIPELINE_FAILURES as exc:
        report["status"] = "failed"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        best = getattr(exc, "best_error", None)
        if best is not None:
            report["error"]["best_error"] = best
        fit = getattr(exc, "report", None)
        if fit is not None:
            report["fit"] = fit.to_json()
        _emit(dumps(report), args.report)
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    cert = report.get("certified_error")
    ok = cert is not None and cert < target
    report["status"] = "ok" if ok else "uncertified"
    if cert is None:
        report["error"] = {"type": "Uncertified", "message": "no Lipschitz bound; pass --lipschitz to certify"}
    _emit(dumps(report), args.report)
    if model is not None:
        model["function"] = f.source
        _write_model(args.model, model)
    if args.csv:
        xs = grid.points
        header = ["x", "f_lo", "f_hi", "g_lo", "g_hi"]
        with_dh = args.method == "jackson"
        if with_dh:
            header.append("dh")
        _emit(_csv_text(header, _overlay_rows(f, g, xs, with_dh)), args.csv)
    return 0 if ok else 2


def _run_method(args, f, grid, report):
    if args.method == "sw":
        from .stone_weierstrass import sw_approximant

        g, rep = sw_approximant(f, args.eps, grid, cap=args.max_cover)
        report.update(rep.to_json())
        model = dict(g.to_json(), schema_version=SCHEMA_VERSION)
        return model, g, args.eps
    if args.method == "jackson":
        from .jackson import build_jackson, jackson_report

        g = build_jackson(f, args.n, args.eps, grid if f.domain == (0.0, 1.0) else None)
        report.update(jackson_report(f, g))
        bound = report["bound_2omega"]
        # Jackson targets 2 omega(f, 1/n) + eps rather than eps itself
        target = (bound + args.eps) if bound is not None else args.eps
        report["target"] = target
        model = dict(g.to_json(), schema_version=SCHEMA_VERSION)
        # the approximant lives on [0, 1]; compare against the rescaled function
        return model, _Rescaled(g, f.domain), math.nextafter(target, math.inf)
    from .network import FitConfig, fit_network

    config = FitConfig(steepness=args.steepness, max_terms=args.max_terms)
    net, fit = fit_network(f, args.eps, config, grid)
    report.update({"m": fit.m, "terms": fit.terms, "certified_error": fit.certified_error,
                   "fit": fit.to_json()})
    return net.to_json(), net, args.eps


class _Rescaled:
    """A [0, 1] approximant viewed on the original domain."""

    def __init__(self, g, domain):
        self.g = g
        self.a, self.b = domain

    def sample(self, xs):
        return self.g.sample((np.asarray(xs, dtype=float) - self.a) / (self.b - self.a))


def cmd_verify(args) -> int:
    from .verify import run_verify

    if args.cases < 1:
        raise UsageError("--cases must be positive")
    report = run_verify(args.seed, cases=args.cases)
    _emit(dumps(report), args.report)
    if report["passed"]:
        return 0
    for law in report["laws"]:
        if not law["passed"]:
            ce = json.dumps(_jsonable(law["counterexample"]), ensure_ascii=False)
            print(f"law failed: {law['name']} (max violation {law['max_violation']!r}); "
                  f"counterexample: {ce}", file=sys.stderr)
    return 3


def cmd_synth_bump(args) -> int:
    try:
        p = bump.step_poly(args.a, args.b, args.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except SearchExhausted as exc:
        print(f"SearchExhausted: {exc}", file=sys.stderr)
        return 2
    checked, worst = bump.verify_step(p, args.a, args.b, args.delta)
    _emit(dumps({"schema_version": SCHEMA_VERSION, "m": p.m, "n": p.n,
                 "checked_points": checked, "max_violation": worst}), args.report)
    return 0 if worst == 0.0 else 2


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def cmd_eval_inn(args) -> int:
    from .network import IntervalNetwork, eval_network

    doc = _load_json(args.model)
    try:
        net = IntervalNetwork.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.model} is not a network model: {exc}") from None
    print(str(eval_network(net, args.x)))
    return 0


def load_model(doc: dict):
    kind = doc.get("kind")
    if kind == "sw":
        from .stone_weierstrass import Approximant

        return Approximant.from_json(doc)
    if kind == "jackson":
        from .jackson import JacksonApproximant

        return JacksonApproximant.from_json(doc)
    if kind == "inn":
        from .network import IntervalNetwork

        return IntervalNetwork.from_json(doc)
    raise UsageError(f"unknown model kind {kind!r}")


def cmd_export(args) -> int:
    doc = _load_json(args.model)
    if "function" not in doc:
        raise UsageError(f"{args.model} does not record its target function")
    f = function_from_source(doc["function"])
    if args.kind == "overlay":
        g = load_model(doc)
        if doc.get("kind") == "jackson":
            g = _Rescaled(g, f.domain)
        xs = np.linspace(f.domain[0], f.domain[1], _grid_size(args))
        text = _csv_text(["x", "f_lo", "f_hi", "g_lo", "g_hi"], _overlay_rows(f, g, xs))
    else:
        from .jackson import build_jackson, jackson_report

        eps = args.eps
        rows = []
        for n in args.ns:
            rep = jackson_report(f, build_jackson(f, n, eps))
            rows.append((n, rep["certified_error"], rep["bound_2omega"]))
        text = _csv_text(["n", "certified_error", "bound_2omega"], rows)
    _emit(text, args.out)
    return 0


def _ns(text: str) -> list[int]:
    try:
        ns = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError("every n must be positive")
    return ns


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ivapprox", description="Approximate interval-valued functions with certified errors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ap = sub.add_parser("approximate", help="run the sw, jackson or inn pipeline")
    ap.add_argument("method", choices=["sw", "jackson", "inn"])
    ap.add_argument("--fn", help=f"catalog function: {', '.join(catalog.NAMES)}")
    ap.add_argument("--lower", help="lower endpoint expression in x")
    ap.add_argument("--upper", help="upper endpoint expression in x")
    ap.add_argument("--domain", help="domain 'a,b' for expressions (default 0,1)")
    ap.add_argument("--lipschitz", type=float, help="Lipschitz bound of the expressions")
    ap.add_argument("--eps", type=float, required=True)
    ap.add_argument("--n", type=int, help="number of Jackson nodes minus one")
    ap.add_argument("--grid", type=int, help="grid resolution (default IVA_GRID_DEFAULT or 1001)")
    ap.add_argument("--steepness", type=float, help="logistic steepness for inn")
    ap.add_argument("--max-terms", type=int, default=1024, help="inner-term cap per unit for inn")
    ap.add_argument("--max-cover", type=int, default=256, help="cover size cap for sw")
    ap.add_argument("--report", help="report JSON path (default stdout)")
    ap.add_argument("--csv", help="write x, f and g samples to this CSV")
    ap.add_argument("--model", help="write the approximant JSON here")
    ap.add_argument("--seed", type=int, default=0, help="recorded; the pipelines are deterministic")
    ap.set_defaults(func=cmd_approximate)

    vp = sub.add_parser("verify", help="run the seeded property suites")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--cases", type=int, default=10_000)
    vp.add_argument("--report", help="report JSON path (default stdout)")
    vp.set_defaults(func=cmd_verify)

    bp = sub.add_parser("synth-bump", help="find a step polynomial (1 - x^m)^n")
    bp.add_argument("--a", type=float, required=True)
    bp.add_argument("--b", type=float, required=True)
    bp.add_argument("--delta", type=float, required=True)
    bp.add_argument("--report", help="report JSON path (default stdout)")
    bp.set_defaults(func=cmd_synth_bump)

    ep = sub.add_parser("eval-inn", help="evaluate a saved network at x")
    ep.add_argument("--model", required=True)
    ep.add_argument("--x", type=float, required=True)
    ep.set_defaults(func=cmd_eval_inn)

    xp = sub.add_parser("export", help="plot-ready CSV from a saved model")
    xp.add_argument("--model", required=True)
    xp.add_argument("--kind", choices=["sweep", "overlay"], required=True)
    xp.add_argument("--ns", type=_ns, default=list(SWEEP_NS), help="n values for a sweep (default 4,8,16,32)")
    xp.add_argument("--eps", type=float, default=0.01, help="epsilon for sweep constructions")
    xp.add_argument("--grid", type=int, help="overlay resolution")
    xp.add_argument("--out", help="CSV path (default stdout)")
    xp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ivapprox: error: {exc}", file=sys.stderr)
        return 1
    except (IVAError, ValueError, OSError) as exc:
        print(f"ivapprox: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
