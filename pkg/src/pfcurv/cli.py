"""Command-line driver: ``pfcurv gen|euclid|gowdy|report``.

Exit codes: 0 on success, 2 for invalid arguments, 3 for a numerical
failure (the failing element is named on stderr).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import errors
from .experiments import DUAL_CHOICES, GOWDY_BLOCKS, run_euclidean_suite, run_gowdy_suite
from .generators import LAYER_COUNTS, RADIAL

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

NUMERIC_ERRORS = (
    errors.NoConvergence, errors.StepFailure, errors.DegenerateTetrahedron,
    errors.EmptyRegion, errors.NotDelaunay, errors.DegenerateHinge,
    errors.TriangleInequalityViolated,
)
USAGE_ERRORS = (errors.UnknownSurface, errors.UnsupportedLayerCount, ValueError)


def _grid(value):
    v = value.lower()
    if v in ("rect", "rectangular"):
        return "rect"
    if v == "skew":
        return "skew"
    raise argparse.ArgumentTypeError(f"invalid grid {value!r} (choose rect or skew)")


def _positive(value):
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return x


def build_parser():
    p = argparse.ArgumentParser(prog="pfcurv", description="Piecewise flat curvature experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated mesh (ISM, plus OFF when Euclidean)")
    g.add_argument("--surface", default="modified-sphere",
                   choices=list(RADIAL) + ["cylinder", "gowdy-plane"])
    g.add_argument("--layers", type=int, default=6, help="layer count for radial surfaces")
    g.add_argument("--blocks", type=int, default=6, help="rows per period (gowdy-plane)")
    g.add_argument("--grid", type=_grid, default="rect", help="rect or skew (gowdy-plane)")
    g.add_argument("--out", default=".")

    e = sub.add_parser("euclid", help="Euclidean convergence study (layered meshes)")
    e.add_argument("--surface", nargs="+", default=["modified-sphere", "peanut"], choices=RADIAL)
    e.add_argument("--layers", type=int, nargs="+", default=list(LAYER_COUNTS))
    e.add_argument("--dual", choices=DUAL_CHOICES, default="mixed")
    e.add_argument("--rescale-area", action="store_true",
                   help="scale the piecewise flat surface to the smooth area")
    e.add_argument("--out", default="pfcurv-euclid")

    w = sub.add_parser("gowdy", help="tilted plane in the Gowdy metric")
    w.add_argument("--grid", type=_grid, nargs="+", default=["rect", "skew"])
    w.add_argument("--blocks", type=int, nargs="+", default=list(GOWDY_BLOCKS))
    w.add_argument("--delta", type=_positive, default=None, help="layer thickness")
    w.add_argument("--columns", type=int, default=4)
    w.add_argument("--out", default="pfcurv-gowdy")

    r = sub.add_parser("report", help="print tables and plot summaries from CSV output")
    r.add_argument("--out", default=".", help="directory holding table2.csv and/or table3.csv")
    return p


def _gen(args):
    from .embedding import write_off
    from .generators import generate_cylinder_grid, generate_gowdy_grids, generate_layered_surface
    from .surface import write_ism

    os.makedirs(args.out, exist_ok=True)
    if args.surface == "gowdy-plane":
        grid = generate_gowdy_grids(args.grid, args.blocks)
        stem = os.path.join(args.out, f"gowdy-{grid.kind}-B{args.blocks}")
        write_ism(grid.surface, stem + ".ism")
        print(stem + ".ism")
        return
    if args.surface == "cylinder":
        mesh = generate_cylinder_grid()
        stem = os.path.join(args.out, "cylinder")
    else:
        mesh = generate_layered_surface(args.surface, args.layers)
        stem = os.path.join(args.out, f"{args.surface}-L{args.layers}")
    write_ism(mesh.surface, stem + ".ism")
    print(stem + ".ism")
    if mesh.embedded.lifts is None or not mesh.embedded.lifts.any():
        write_off(mesh.embedded, stem + ".off")
        print(stem + ".off")


def _print_table(path, key):
    from .report import read_summary_csv

    rows = read_summary_csv(path)
    if not rows:
        return rows
    pct = [k for k in rows[0] if k.endswith("_pct")]
    head = ["surface", key, "hinge mean", "hinge max"] + [k[:-4] for k in pct]
    print("  ".join(f"{h:>14}" for h in head))
    for row in rows:
        vals = [row["surface"], str(row[key]), f"{row['hinge_mean_deg']:.3g}",
                f"{row['hinge_max_deg']:.3g}"]
        vals += ["" if row[k] is None else f"{row[k]:.3g}%" for k in pct]
        print("  ".join(f"{v:>14}" for v in vals))
    return rows


def _report(args):
    from .plotting import plot_percent_table

    found = False
    for name, key in (("table2.csv", "layers"), ("table3.csv", "blocks")):
        path = os.path.join(args.out, name)
        if not os.path.exists(path):
            continue
        found = True
        print(f"== {path}")
        rows = _print_table(path, key)
        if rows:
            svg = os.path.join(args.out, name.replace(".csv", ".svg"))
            plot_percent_table(rows, svg, key, title=name[:-4])
            print(svg)
    if not found:
        raise FileNotFoundError(f"no table2.csv or table3.csv in {args.out}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad arguments
    try:
        if args.command == "gen":
            _gen(args)
        elif args.command == "euclid":
            reports = []
            for name in args.surface:
                reports += run_euclidean_suite(name, args.layers, args.dual, args.rescale_area)
            from .experiments import write_euclidean_outputs

            write_euclidean_outputs(reports, args.out)
            print(os.path.join(args.out, "table2.csv"))
        elif args.command == "gowdy":
            run_gowdy_suite(args.grid, args.blocks, args.delta, out=args.out, columns=args.columns)
            print(os.path.join(args.out, "table3.csv"))
        elif args.command == "report":
            _report(args)
    except NUMERIC_ERRORS as exc:
        print(f"pfcurv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (*USAGE_ERRORS, FileNotFoundError) as exc:
        print(f"pfcurv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
