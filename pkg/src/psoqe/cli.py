"""Command-line front end.

Exit codes: 0 success, 1 acceptance failure, 2 usage error, 3 domain error.

    psoqe region --system s1 --region oracle-union --grid 0.001,4,-0.999,0.999,400,400 --out sys1.csv
    psoqe compare --out report.json
    psoqe simulate --system s1 --c 0.5 --w 0.2 --trials 10000 --steps 500 --seed 7
    psoqe witness --system s1 --c 0.9 --w 0.5 --template diagonal
    psoqe verify --level quick
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .model import DomainError, SwarmParams, Template, Variant
from .qe import decide_membership, union_membership
from .raster import GridSpec, compare_regions, rasterize, write_csv
from .regions import RegionId
from .simulate import Dynamics, SimConfig, run_ensemble, stats_document

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _clean(obj):
    """Round floats to 9 significant digits; non-finite floats become null."""
    if isinstance(obj, float):
        return float(f"{obj:.9g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _clean(obj.item())
    return obj


def dumps(doc) -> str:
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _params(args) -> SwarmParams:
    variant = Variant.parse(args.system)
    if args.w is None:
        raise UsageError("--w is required")
    if variant is Variant.SIGMA1:
        if args.c is None or args.c1 is not None or args.c2 is not None:
            raise UsageError("system 1 takes --c only")
        params = SwarmParams.sigma1(args.c, args.w)
    else:
        if args.c is not None and (args.c1, args.c2) == (None, None):
            params = SwarmParams.from_gain(variant, args.c, args.w)
        elif args.c is None and None not in (args.c1, args.c2):
            params = SwarmParams.sigma2(args.c1, args.c2, args.w)
        else:
            raise UsageError("system 2 takes --c1 and --c2 (or --c for their sum)")
    return params


def _grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_region(args) -> int:
    grid = _grid(args.grid)
    if grid.c_min <= 0:
        raise DomainError("region grids need cMin > 0")
    variant = Variant.parse(args.system)
    region = RegionId.parse(args.region, variant)
    ras = rasterize(region, grid, variant, threads=args.threads)
    write_csv(ras, args.out)
    meta = {"command": "region", "version": __version__, "system": variant.value,
            "region": ras.region, "grid": grid.as_dict(), "member_cells": ras.count,
            "format": "c,w,member; w outer, c inner"}
    _write(dumps(meta), args.out + ".json")
    return EXIT_OK


def cmd_compare(args) -> int:
    grid = _grid(args.grid)
    report = compare_regions(grid, threads=args.threads)
    report = {**report, "config": {"command": "compare", "grid": grid.as_dict(),
                                   "threads": args.threads}, "version": __version__}
    _write(dumps(report), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params(args)
    cfg = SimConfig(params, trials=args.trials, steps=args.steps, seed=args.seed,
                    init_box=args.init_box, dynamics=Dynamics(args.dynamics),
                    theta_conv=args.theta_conv, theta_div=args.theta_div)
    witness = None
    decision = None
    if args.witness_template != "none":
        params.require_positive()
        decision = (union_membership(params) if args.witness_template == "union"
                    else decide_membership(params, Template.parse(args.witness_template)))
        witness = decision.witness
    doc = stats_document(cfg, run_ensemble(cfg, witness))
    doc["config"]["witness_template"] = args.witness_template
    doc["witness"] = None if decision is None else decision.as_dict()
    doc["version"] = __version__
    _write(dumps(doc), args.out)
    return EXIT_OK


def cmd_witness(args) -> int:
    params = _params(args).require_positive()
    if args.template == "union":
        dec = union_membership(params)
    else:
        dec = decide_membership(params, Template.parse(args.template))
    doc = {"status": "member" if dec.member else "non-member", **dec.as_dict(),
           "config": {"params": params.as_dict(), "template": args.template},
           "version": __version__}
    _write(dumps(doc), None)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .acceptance import run_all

    def echo(res):
        print(json.dumps(_clean(res.as_dict()), allow_nan=False), flush=True)

    results = run_all(args.level, echo=echo)
    summary = {"summary": True, "level": args.level, "version": __version__,
               "passed": sum(r.passed for r in results), "total": len(results),
               "failed": [r.number for r in results if not r.passed]}
    print(json.dumps(_clean(summary)), flush=True)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="psoqe", description="Lyapunov/QE convergence regions of PSO.",
                     formatter_class=fmt)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=1, help="cap on worker threads")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def point_flags(p):
        p.add_argument("--system", default="sigma1", help="sigma1 | sigma2 (also s1, s2, σ1, σ2)")
        p.add_argument("--c", type=float, default=None, help="common coefficient (system 1)")
        p.add_argument("--c1", type=float, default=None, help="cognitive coefficient (system 2)")
        p.add_argument("--c2", type=float, default=None, help="social coefficient (system 2)")
        p.add_argument("--w", type=float, default=None, help="inertia weight")

    p = sub.add_parser("region", help="rasterize one region to CSV", formatter_class=fmt)
    p.add_argument("--system", default="sigma1", help="sigma1 | sigma2")
    p.add_argument("--region", required=True,
                   help="sys-identity, sys-diagonal, sys-offdiag, kadirkamanathan, gazi, poli, "
                        "oracle-identity, oracle-diagonal, oracle-offdiag, oracle-union, "
                        "or an id such as Sys1_Identity")
    p.add_argument("--grid", default="0.001,4,-0.999,0.999,400,400",
                   help="cMin,cMax,wMin,wMax,nC,nW")
    p.add_argument("--out", required=True, help="CSV path; metadata goes to OUT.json")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("compare", help="area/overlap/containment report", formatter_class=fmt)
    p.add_argument("--grid", default="0,4,-1,1,2000,2000", help="cMin,cMax,wMin,wMax,nC,nW")
    p.add_argument("--out", default="-", help="JSON path, - for stdout")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="Monte-Carlo ensemble", formatter_class=fmt)
    point_flags(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init-box", type=float, default=1.0,
                   help="half-width of the uniform initial box for x and v")
    p.add_argument("--dynamics", choices=[d.value for d in Dynamics], default="system")
    p.add_argument("--theta-conv", type=float, default=0.1)
    p.add_argument("--theta-div", type=float, default=10.0)
    p.add_argument("--witness-template", default="none",
                   choices=["none", "identity", "diagonal", "offdiag", "union"],
                   help="track E{V} for the witness of this template")
    p.add_argument("--out", default="-", help="JSON path, - for stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("witness", help="decide membership and print the witness",
                       formatter_class=fmt)
    point_flags(p)
    p.add_argument("--template", choices=["identity", "diagonal", "offdiag", "union"],
                   default="union")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="run the acceptance criteria", formatter_class=fmt)
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"psoqe: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        print(f"psoqe: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
