"""Command line interface.

Subcommands: constants, check, heat, kernel, harnack, campaign, eigs.
All numeric JSON output uses Python's round-trip float formatting. Exit
status is nonzero when a check or campaign fails.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .campaign import CHECKS, CampaignConfig, run_campaign
from .errors import MulapError
from .generators import random_positive_function, random_vertex_function, rng_for
from .graph_io import (
    load_graph,
    load_vertex_function,
    write_eigenfunctions_csv,
    write_heat_kernel_csv,
    write_heat_solution_csv,
    write_spectrum_csv,
)
from .graphs import constants
from .harnack import (
    bounded_q_bound,
    check_harnack,
    check_kernel_comparison,
    harnack_bound,
)
from .heat import check_kernel_identities, heat_kernel, solve_heat
from .operators import (
    check_alt_estimate,
    check_bhlly_analog,
    check_gradient_estimate,
    check_integral_identity,
    check_sqrt_comparison,
)
from .spectral import check_lower_bound, cheng_bound_check, eigendecompose


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _write_or_print(writer, obj, out):
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer(obj, fh)
    else:
        writer(obj, sys.stdout)


def _cmd_constants(args):
    g = load_graph(args.graph)
    _print_json(constants(g).as_dict())
    return 0


U_CHECKS = {
    "gradient_estimate": check_gradient_estimate,
    "alt_estimate": check_alt_estimate,
    "sqrt_comparison": check_sqrt_comparison,
}


def _cmd_check(args):
    g = load_graph(args.graph)
    rng = rng_for(args.seed)
    rtol = args.tol
    name = args.name
    if name in U_CHECKS:
        u = load_vertex_function(g, args.u) if args.u else random_positive_function(g, rng)
        kwargs = {} if rtol is None else {"rtol": rtol}
        report = U_CHECKS[name](g, u, **kwargs)
    elif name == "laplacian_integral":
        f = load_vertex_function(g, args.u) if args.u else random_vertex_function(g, rng, 10.0)
        report = check_integral_identity(g, f, **({} if rtol is None else {"rtol": rtol}))
    elif name == "cheng_bound":
        report = cheng_bound_check(g, **({} if rtol is None else {"rtol": rtol}))
    elif name == "lower_bound":
        report = check_lower_bound(g, **({} if rtol is None else {"rtol": rtol}))
    elif name == "kernel_identities":
        report = check_kernel_identities(g, **({} if rtol is None else {"atol": rtol}))
    elif name == "kernel_comparison":
        report = check_kernel_comparison(
            g, args.x, args.y, args.t, args.delta,
            **({} if rtol is None else {"rtol": rtol}))
    elif name in ("harnack", "sqrt_analog"):
        u0 = load_vertex_function(g, args.u) if args.u else random_positive_function(g, rng, 0.1, 10.0)
        q = load_vertex_function(g, args.q) if args.q else None
        sol = solve_heat(g, u0, q, (args.t0, args.t1), method=args.method,
                         steps=args.steps)
        if name == "harnack":
            report = check_harnack(sol, **({} if rtol is None else {"rtol": rtol}))
        else:
            report = check_bhlly_analog(sol, **({} if rtol is None else {"rtol": rtol}))
    else:
        known = sorted(set(U_CHECKS) | {"laplacian_integral", "cheng_bound",
                                        "lower_bound", "kernel_identities",
                                        "kernel_comparison", "harnack", "sqrt_analog"})
        raise MulapError(f"unknown check {name!r}; known: {known}")
    _print_json(report.as_dict(include_pointwise=args.pointwise))
    return 0 if report.passed else 1


def _cmd_heat(args):
    g = load_graph(args.graph)
    u0 = load_vertex_function(g, args.u0)
    q = load_vertex_function(g, args.q) if args.q else None
    sol = solve_heat(g, u0, q, (args.t0, args.t1), method=args.method,
                     steps=args.steps)
    _write_or_print(write_heat_solution_csv, sol, args.out)
    return 0


def _cmd_kernel(args):
    g = load_graph(args.graph)
    _write_or_print(write_heat_kernel_csv, heat_kernel(g, args.t), args.out)
    return 0


def _cmd_harnack(args):
    g = load_graph(args.graph)
    q = load_vertex_function(g, args.q) if args.q else None
    bound = harnack_bound(g, args.x, args.y, args.t1, args.t2, q)
    out = bound.as_dict()
    if args.c0 is not None:
        out["bounded_q_factor"] = bounded_q_bound(g, args.x, args.y,
                                                  args.t1, args.t2, args.c0)
        out["c0"] = args.c0
    _print_json(out)
    return 0


def _cmd_campaign(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        config = CampaignConfig.from_json(fh.read())
    report = run_campaign(config)
    if not config.output_path:
        _print_json(report)
    else:
        ok = "ok" if report["all_passed"] else "FAILED"
        print(f"campaign {ok}: report written to {config.output_path}")
    return 0 if report["all_passed"] else 1


def _cmd_eigs(args):
    g = load_graph(args.graph)
    dec = eigendecompose(g)
    _write_or_print(write_spectrum_csv, dec, args.out)
    if args.vectors_out:
        with open(args.vectors_out, "w", newline="", encoding="utf-8") as fh:
            write_eigenfunctions_csv(dec, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mulap",
        description="Weighted-graph Laplacian calculus and inequality checks.",
    )
    parser.add_argument("--version", action="version", version=f"mulap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print the structural constants as JSON")
    p.add_argument("graph")
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("check", help="run one inequality check")
    p.add_argument("name", help=f"one of {sorted(CHECKS)}")
    p.add_argument("--graph", required=True)
    p.add_argument("--u", help="vertex function file (random when omitted)")
    p.add_argument("--q", help="potential file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--x", default="0")
    p.add_argument("--y", default="0")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--method", default="eigen_exact")
    p.add_argument("--pointwise", action="store_true",
                   help="include per-vertex sides in the JSON")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("heat", help="solve the heat equation, write CSV")
    p.add_argument("--graph", required=True)
    p.add_argument("--u0", required=True)
    p.add_argument("--q")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--method", default="eigen_exact")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_heat)

    p = sub.add_parser("kernel", help="heat kernel at one time, write CSV")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("harnack", help="print the Harnack bound as JSON")
    p.add_argument("--graph", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, required=True)
    p.add_argument("--q")
    p.add_argument("--c0", type=float, default=None,
                   help="also print the bounded-potential factor")
    p.set_defaults(fn=_cmd_harnack)

    p = sub.add_parser("campaign", help="run a verification campaign")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_campaign)

    p = sub.add_parser("eigs", help="print or write the spectrum")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.add_argument("--vectors-out")
    p.set_defaults(fn=_cmd_eigs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except MulapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
