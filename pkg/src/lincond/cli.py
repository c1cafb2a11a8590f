"""Command-line front end: verdicts to stdout, CSV plus figures to disk.

Exit codes: 0 all verdicts hold, 1 a verdict failed (a scan came back
non-monotone, a bound broke), 2 the run could not be computed (bad
configuration or a numerical failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import counterexample as ce
from . import lin_analysis, plots, product
from .densities import parse_density
from .errors import ConfigError, DomainError, LinCondError
from .product import DEFAULT_SEED, ProductDensity
from .quadrature import QuadratureSpec

_WINDOW_SUMMARY_HEADER = (
    "window_n,nu,z_star,z_star_star,slope_max,slope_min,lin_max,lin_min"
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[h]) for h in header) + "\n")


def _window_summary_row(n: int, analysis) -> str:
    f = analysis.summary_fields()
    vals = [n, f["nu"], f["z_star"], f["z_star_star"], f["slope_max"],
            f["slope_min"], f["lin_max"], f["lin_min"]]
    return ",".join(_fmt(float(v) if not isinstance(v, int) else v) for v in vals)


def _window_rows(analysis):
    return [
        {"z": z, "g": g, "g_prime": gp, "lin_g": lg}
        for z, g, gp, lg in zip(
            analysis.z_samples,
            analysis.g_samples,
            analysis.g_prime_samples,
            analysis.lin_samples,
        )
    ]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=".", help="output directory (default: cwd)")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="seed for sampled checks")
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering next to the CSV output")


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_lin(args) -> int:
    # family densities carry closed-form Lin functions, which stay exact
    # far past the range where the pdf itself underflows
    d = parse_density(args.density)
    if not (0.0 < args.x0 < args.xmax) or args.points < 2:
        raise ConfigError("need 0 < x0 < xmax and at least 2 points")
    grid = np.geomspace(args.x0, args.xmax, args.points)
    report = lin_analysis.report_from_values(
        grid, d.lin_function_closed(grid), args.x0
    )
    out = _outdir(args)
    with open(out / "lin.csv", "w", newline="") as fh:
        report.write_csv(fh)
    if not args.no_figures:
        plots.render_lin_report(report, out / "lin.png", title=str(d))
    print(report.summary_line())
    return 0 if report.monotone else 1


def _product_rows(args):
    f1 = parse_density(args.f1)
    f2 = parse_density(args.f2)
    pd = ProductDensity(f1, f2, _spec(args))
    grid = np.geomspace(args.x0, args.xmax, args.points)
    return pd, product.product_table(pd, grid)


def _cmd_product(args) -> int:
    pd, rows = _product_rows(args)
    out = _outdir(args)
    header = ["x", "g", "lin_A", "lin_B", "bound_rhs", "holds"]
    _write_csv(out / "product.csv", header, rows)
    if not args.no_figures:
        plots.render_product_table(
            rows, out / "product.png", title=f"{pd.f1} x {pd.f2}"
        )
    scan = lin_analysis.report_from_values(
        [r["x"] for r in rows], [r["lin_A"] for r in rows], args.x0
    )
    bounds_hold = all(r["holds"] for r in rows)
    positive = product.positivity_integrand_check(
        pd, args.x0, args.xmax, samples=1000, seed=args.seed
    )
    print(
        f"{scan.summary_line()} bound_holds={_fmt(bounds_hold)} "
        f"integrand_positive={_fmt(positive)}"
    )
    return 0 if (scan.monotone and bounds_hold and positive) else 1


def _cmd_bound(args) -> int:
    pd, rows = _product_rows(args)
    out = _outdir(args)
    header = ["x", "g", "lin_A", "lin_B", "bound_rhs", "holds"]
    _write_csv(out / "bound.csv", header, rows)
    if not args.no_figures:
        plots.render_product_table(
            rows, out / "bound.png", title=f"{pd.f1} x {pd.f2}"
        )
    bounds_hold = all(r["holds"] for r in rows)
    print(f"bound_holds={_fmt(bounds_hold)}")
    return 0 if bounds_hold else 1


def _cmd_counterexample(args) -> int:
    f1 = parse_density(args.f1)
    f2 = parse_density(args.f2)
    block = ce.make_block(f1, f2, args.v, args.a, args.r,
                          beta_fraction=args.beta_fraction)
    model = ce.JointDensityModel(f1, f2, (block,), _spec(args))
    analysis = ce.slope_search(model, 0, args.A, args.B)
    out = _outdir(args)
    _write_csv(out / "window.csv", ["z", "g", "g_prime", "lin_g"],
               _window_rows(analysis))
    if not args.no_figures:
        plots.render_window(analysis, out / "window.png",
                            title=f"{f1} x {f2}, v={args.v}, a={args.a}, r={args.r}")
    print(_WINDOW_SUMMARY_HEADER)
    print(_window_summary_row(1, analysis))
    return 0


def _cmd_demo(args) -> int:
    f1 = parse_density(args.f1)
    f2 = parse_density(args.f2)
    analyses = ce.limsup_liminf_demo(
        f1, f2, args.blocks, v1=args.v, a=args.a, r=args.r,
        base_slope=args.A1, beta_fraction=args.beta_fraction, spec=_spec(args),
    )
    out = _outdir(args)
    print(_WINDOW_SUMMARY_HEADER)
    for n, analysis in enumerate(analyses, start=1):
        _write_csv(out / f"window_{n}.csv", ["z", "g", "g_prime", "lin_g"],
                   _window_rows(analysis))
        if not args.no_figures:
            plots.render_window(analysis, out / f"window_{n}.png",
                                title=f"window {n}")
        print(_window_summary_row(n, analysis))
    if not args.no_figures:
        plots.render_demo_summary(analyses, out / "demo_summary.png",
                                  title=f"{f1} x {f2}")
    base = min(
        min(a.lin_max, -a.lin_min) / (n + 1.0)
        for n, a in enumerate(analyses)
    )
    increasing = all(
        a.lin_max > b.lin_max and a.lin_min < b.lin_min
        for b, a in zip(analyses[:-1], analyses[1:])
    )
    print(f"base_lin_level={_fmt(base)} escalation={_fmt(increasing)}")
    return 0 if (increasing and base > 0.0) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lincond",
        description="Lin's condition for products of random variables: "
                    "checks, bounds, and the dependent counterexample.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lin", help="Lin function scan of one density")
    p.add_argument("--density", required=True, help="e.g. gamma:2,1")
    p.add_argument("--x0", type=float, default=0.1)
    p.add_argument("--xmax", type=float, default=1e4)
    p.add_argument("--points", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=_cmd_lin)

    for name, helptext, fn in (
        ("product", "product-density Lin scan plus lower bound", _cmd_product),
        ("bound", "lower bound check over a grid", _cmd_bound),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--f1", required=True, help="e.g. exp:1")
        p.add_argument("--f2", required=True, help="e.g. gamma:2,1")
        p.add_argument("--x0", type=float, default=1e-2)
        p.add_argument("--xmax", type=float, default=1e2)
        p.add_argument("--points", type=int, default=24)
        _add_common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("counterexample",
                       help="dependent-product slope search on one window")
    p.add_argument("--f1", required=True)
    p.add_argument("--f2", required=True)
    p.add_argument("--v", type=float, default=2.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--r", type=float, default=0.2)
    p.add_argument("--A", type=float, default=10.0)
    p.add_argument("--B", type=float, default=10.0)
    p.add_argument("--beta-fraction", type=float, default=0.9)
    _add_common(p)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("demo", help="escalating windows along disjoint squares")
    p.add_argument("--f1", required=True)
    p.add_argument("--f2", required=True)
    p.add_argument("--blocks", type=int, default=3)
    p.add_argument("--v", type=float, default=2.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--r", type=float, default=0.2)
    p.add_argument("--A1", type=float, default=0.02,
                   help="base slope target; window n uses n * A1")
    p.add_argument("--beta-fraction", type=float, default=0.9)
    _add_common(p)
    p.set_defaults(func=_cmd_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except LinCondError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
