"""Command line front end: ``horomaps <command> ...``.

Global options go before the command::

    horomaps --output csv --seed 3 basis --mu 2 --k 1 --grid -2 2 5
    horomaps solve --mu 2 --T 1 --output report.json
    horomaps verify all
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import checks, harness, io, solver
from . import distributions as dist
from .config import apply_config
from .errors import HoromapsError
from .models import SpectralFunction, evaluate, model_for, sobolev_norm
from .sl2core import classify


def _complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _nodes(args, model) -> np.ndarray:
    if args.points:
        pts = np.array([_complex(p) for p in args.points])
        return pts if np.any(pts.imag) else pts.real
    lo, hi, n = args.grid
    x = np.linspace(float(lo), float(hi), int(n))
    if model.is_discrete:
        return x + 1j * args.y
    return x


def _function(args, model=None):
    """The input function: --input document, else a random window-limited one from --seed."""
    if getattr(args, "input", None):
        f = io.load_function(args.input)
        if args.mu is not None and abs(f.mu - args.mu) > 1e-12:
            raise SystemExit(f"--mu {args.mu} disagrees with the input document (mu = {f.mu})")
        return f
    if args.mu is None:
        raise SystemExit("give --mu (and optionally --input)")
    rng = np.random.default_rng(args.seed)
    return checks.random_function(model or model_for(args.mu), rng, 4)


def _fmt(args, default: str = "json") -> str:
    return args.output_format or default


# ------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    s = classify(args.mu)
    io.emit({"mu": s.mu, "class": s.kind, "nu_re": s.nu.real, "nu_im": s.nu.imag,
             "lowest_weight": s.lowest_weight}, _fmt(args))
    return 0


def cmd_basis(args) -> int:
    model = model_for(args.mu, args.chart)
    nodes = _nodes(args, model)
    g = evaluate(SpectralFunction.basis(model, args.k), nodes, model.chart, args.derivative)
    if _fmt(args) == "csv":
        sys.stdout.write(g.to_csv())
    else:
        io.emit({"mu": args.mu, "k": args.k, "chart": g.chart, "derivative_order": g.derivative_order,
                 "nodes": g.nodes, "values": g.values}, "json")
    return 0


def cmd_norm(args) -> int:
    if args.input:
        f = _function(args)
    else:
        f = SpectralFunction.basis(model_for(args.mu), args.k)
    rows = [{"s": s, "norm": sobolev_norm(f, s)} for s in args.s]
    io.emit(rows, _fmt(args))
    return 0


def _distributions(args, model) -> list:
    out = []
    kinds = args.kind or ["delta0", "delta_hat"]
    y = args.y if model.is_discrete else None
    for kind in kinds:
        if kind == "delta0":
            out.append(dist.delta0(model))
        elif kind == "delta_r":
            out.extend(dist.delta_r(model, r) for r in range(1, args.r + 1))
        elif kind == "delta_hat":
            ks = args.ks or ([1, 2, 3] if model.is_discrete else [-2, -1, 0, 1, 2])
            out.extend(dist.delta_hat(model, k, args.T, y) for k in ks)
    return out


def cmd_dist(args) -> int:
    if args.input or args.k is None:
        f = _function(args)
    else:
        f = SpectralFunction.basis(model_for(args.mu), args.k)
    model = f.model
    if args.order_grid:
        d = dist.delta0(model) if not args.kind or args.kind[0] == "delta0" else dist.delta_r(model, args.r)
        rows = []
        for window in (args.window, 2 * args.window):
            table = dist.distribution_order_estimate(d, args.order_grid, window)
            rows.extend({"window": window, "s": s, "value": v} for s, v in table.items())
        io.emit(rows, _fmt(args))
        return 0
    io.emit(dist.report_rows(f, _distributions(args, model)), _fmt(args))
    return 0


def cmd_solve(args) -> int:
    f = _function(args)
    if args.coboundary or not args.input:
        f = checks.coboundary(f, args.T)
    kw = {} if args.method == "fourier" else {"order": args.order}
    rep = solver.solve(f, args.T, args.method, **kw)
    report_path = args.report
    csv_path = args.grid_csv
    if csv_path is None and report_path is not None:
        csv_path = str(Path(report_path).with_suffix(".csv"))
    if csv_path is not None:
        Path(csv_path).write_text(rep.u.to_csv())
    doc = rep.to_json_dict(csv_path)
    if report_path is not None:
        io.write_json(doc, report_path)
    if _fmt(args) == "csv":
        sys.stdout.write(rep.u.to_csv())
    else:
        io.emit(doc, "json")
    return 0


def cmd_ergodic(args) -> int:
    g = _function(args)
    if args.coboundary or not args.input:
        f = harness.Coboundary(g, args.T)
    else:
        f = g
    rows = []
    x0 = _complex(args.x)
    for N in args.N:
        r = harness.ergodic_average(f, x0, args.T, N)
        row = {"N": N, "direct_re": r.direct.real, "direct_im": r.direct.imag}
        if r.telescoped is not None:
            row.update(telescoped_re=r.telescoped.real, telescoped_im=r.telescoped.imag,
                       gap=abs(r.direct - r.telescoped))
        rows.append(row)
    if len(args.N) >= 2:
        vals = [abs(complex(r["direct_re"], r["direct_im"])) for r in rows]
        if all(v > 0 for v in vals):
            slope = float(np.polyfit(np.log(args.N), np.log(vals), 1)[0])
            for r in rows:
                r["loglog_slope"] = slope
    io.emit(rows, _fmt(args))
    return 0


def cmd_rate(args) -> int:
    if args.input:
        comps = []
        for path in args.input:
            f = io.load_function(path)
            comps.append((f.mu, f))
        asm = harness.SpectralAssembly(comps, args.mu0, s=args.s, T=args.T)
        terms, cutoffs = harness.bound_terms(asm)
        rows = []
        for N in args.N:
            rep = harness.predict_ergodic_bound(asm, N, terms=terms)
            rows.append({"N": N, "bound": rep.value, "raw_bound": rep.raw_value, "constant_free": True})
        io.emit(rows if _fmt(args) == "csv" else {"rows": rows, "tau_cutoffs": cutoffs,
                                                  "terms": [t.__dict__ for t in terms if t.weight > 0]}, _fmt(args))
        return 0
    mus = args.mu or [1.0, 0.75, -8.0]
    if _fmt(args) == "csv":
        rows = []
        for mu in mus:
            t = harness.exponent_table(mu, args.mu0)
            rows.extend({"mu": mu, "mu0": args.mu0, "alpha": t.alpha, **r.__dict__} for r in t.rows)
        io.emit(rows, "csv")
    else:
        io.emit([harness.exponent_table(mu, args.mu0).to_json_dict() for mu in mus], "json")
    return 0


def _table(rows: list[checks.Check]) -> str:
    width = max([len(r.name) for r in rows] + [10])
    lines = [f"{'status':6}  {'suite':11}  {'check':{width}}  {'value':>11}  rel  {'tol':>8}"]
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status:6}  {r.suite:11}  {r.name:{width}}  {r.value:11.3e}  {r.relation:3}  {r.tol:8.2g}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    names = list(checks.SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        rows.extend(checks.run_suite(name, args.seed))
    if args.output_format:
        io.emit([r.row() for r in rows], args.output_format)
    else:
        sys.stdout.write(_table(rows))
        failed = sum(not r.passed for r in rows)
        sys.stdout.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return 0 if all(r.passed for r in rows) else 1


# --------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="horomaps", description="Horocycle-map harmonic analysis on SL(2, R) models.")
    p.add_argument("--config", help="TOML file overriding grids, tolerances and windows")
    p.add_argument("--output", dest="output_format", choices=("json", "csv"), help="report format on stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for random inputs and the verification battery")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="series class and nu for a Casimir value")
    s.add_argument("--mu", type=float, required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("basis", help="evaluate a basis vector (or its flow derivatives)")
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--chart", choices=("Line", "Circle", "HalfPlane", "Disk"))
    s.add_argument("--derivative", type=int, default=0)
    s.add_argument("--points", nargs="+", help="explicit nodes, e.g. 0.5 1+1j")
    s.add_argument("--grid", nargs=3, default=("-2", "2", "9"), metavar=("START", "STOP", "NUM"))
    s.add_argument("--y", type=float, default=1.0, help="height of the grid line (discrete series)")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("norm", help="Sobolev norms")
    s.add_argument("--mu", type=float)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--input")
    s.add_argument("--s", type=float, nargs="+", default=[0.0, 1.0, 2.0])
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("dist", help="evaluate distributions on a function")
    s.add_argument("--mu", type=float)
    s.add_argument("--k", type=int, help="use the basis vector u_k as input")
    s.add_argument("--input")
    s.add_argument("--kind", nargs="+", choices=("delta0", "delta_r", "delta_hat"))
    s.add_argument("--r", type=int, default=2, help="highest jet order for delta_r")
    s.add_argument("--ks", type=int, nargs="+", help="frequencies k for delta_hat at k/T")
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--y", type=float, default=1.0)
    s.add_argument("--order-grid", type=float, nargs="+", help="print the order-estimate table at these s")
    s.add_argument("--window", type=int, default=64)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("solve", help="solve u(x - T) - u(x) = f")
    s.add_argument("--mu", type=float)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--order", type=int, default=None)
    s.add_argument("--method", choices=("series", "fourier", "auto"), default="auto")
    s.add_argument("--input", help="function document for f (or for g with --coboundary)")
    s.add_argument("--coboundary", action="store_true", help="treat the input as g and solve for f = g(.-T) - g")
    s.add_argument("--output", dest="report", help="write the JSON report here")
    s.add_argument("--grid-csv", help="where to write the solution grid (default: next to the report)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("ergodic", help="ergodic averages along translates")
    s.add_argument("--mu", type=float)
    s.add_argument("--input")
    s.add_argument("--coboundary", action="store_true")
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--x", default="0.3")
    s.add_argument("--N", type=int, nargs="+", default=[2**j for j in range(4, 15)])
    s.set_defaults(func=cmd_ergodic)

    s = sub.add_parser("rate", help="exponent table or constant-free ergodic bound")
    s.add_argument("--mu0", type=float, default=0.75)
    s.add_argument("--mu", type=float, nargs="+")
    s.add_argument("--input", nargs="+", help="component function documents for the bound")
    s.add_argument("--N", type=int, nargs="+", default=[10, 100, 1000, 10000])
    s.add_argument("--s", type=float, default=14.0)
    s.add_argument("--T", type=float, default=1.0)
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("suite", choices=list(checks.SUITES) + ["all"])
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        apply_config(args.config)
    try:
        return args.func(args)
    except (HoromapsError, ValueError) as exc:
        sys.stderr.write(f"horomaps: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
