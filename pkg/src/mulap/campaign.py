"""Verification campaigns: many random graphs, many checks, one JSON report.

A campaign is fully determined by its configuration (in particular the
seed): rerunning produces a byte-identical report apart from the wall
clock entry. Worst witnesses embed the graph and the random inputs
inline so any failure replays standalone.
"""

from __future__ import annotations

import json
import sys
import time
import zlib
from dataclasses import dataclass, field

import numpy as np
import scipy

from . import __version__
from .errors import MulapError
from .generators import generate, random_positive_function, random_vertex_function, rng_for
from .graph_io import graph_to_json
from .harnack import check_harnack, check_kernel_comparison, min_path_functional
from .heat import check_kernel_identities, solve_heat
from .operators import (
    check_alt_estimate,
    check_bhlly_analog,
    check_gradient_estimate,
    check_integral_identity,
    check_sqrt_comparison,
)
from .spectral import cheng_bound_check, check_lower_bound

__all__ = ["CampaignConfig", "run_campaign", "CHECKS"]


@dataclass
class CampaignConfig:
    seed: int = 0
    n_graphs: int = 10
    graph_family: dict | str = "erdos_renyi"
    weight_scheme: dict | str = "unit"
    measure_scheme: dict | str = "unit"
    checks: list[str] = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None

    @classmethod
    def from_json(cls, obj) -> "CampaignConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in obj.items() if k in known})

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_graphs": self.n_graphs,
            "graph_family": self.graph_family,
            "weight_scheme": self.weight_scheme,
            "measure_scheme": self.measure_scheme,
            "checks": list(self.checks),
            "tolerances": dict(self.tolerances),
            "output_path": self.output_path,
        }


def _run_gradient_estimate(g, rng, rtol):
    u = random_positive_function(g, rng)
    return check_gradient_estimate(g, u, rtol=rtol), {"u": u.tolist()}


def _run_alt_estimate(g, rng, rtol):
    u = random_positive_function(g, rng)
    return check_alt_estimate(g, u, rtol=rtol), {"u": u.tolist()}


def _run_sqrt_comparison(g, rng, rtol):
    u = random_positive_function(g, rng)
    return check_sqrt_comparison(g, u, rtol=rtol), {"u": u.tolist()}


def _run_sqrt_analog(g, rng, rtol):
    u0 = random_positive_function(g, rng, 0.1, 10.0)
    q = random_vertex_function(g, rng)
    sol = solve_heat(g, u0, q, (0.0, 1.0), steps=10)
    return (check_bhlly_analog(sol, rtol=rtol),
            {"u0": u0.tolist(), "q": q.tolist()})


def _run_harnack(g, rng, rtol):
    u0 = random_positive_function(g, rng, 0.1, 10.0)
    q = random_vertex_function(g, rng)
    sol = solve_heat(g, u0, q, (0.0, 2.0), steps=20)
    return (check_harnack(sol, rtol=rtol),
            {"u0": u0.tolist(), "q": q.tolist()})


def _run_path_functional_bound(g, rng, rtol):
    # min F(q) <= (5/3) C0 (T2 - T1) whenever |q| <= C0
    from .reports import build_report

    c0 = float(rng.uniform(0.0, 2.0))
    q = rng.uniform(-c0, c0, size=g.n)
    x, y = rng.integers(0, g.n, size=2)
    t1, t2 = 0.0, float(rng.uniform(0.2, 3.0))
    value, path = min_path_functional(g, int(x), int(y), t1, t2, q)
    bound = (5.0 / 3.0) * c0 * (t2 - t1)
    report = build_report("path_functional_bound", [value], [bound], rtol,
                          witnesses=lambda i: {"x": int(x), "y": int(y)})
    report.extra["path"] = path
    return report, {"q": q.tolist(), "c0": c0, "t2": t2}


def _run_kernel_identities(g, rng, rtol):
    return check_kernel_identities(g, atol=rtol), {}


def _run_kernel_comparison(g, rng, rtol):
    x, y = (int(v) for v in rng.integers(0, g.n, size=2))
    t = float(rng.choice([1.0, 2.0]))
    delta = float(rng.choice([0.5, 1.0]))
    return (check_kernel_comparison(g, x, y, t, delta, rtol=rtol),
            {"x": x, "y": y, "t": t, "delta": delta})


def _run_cheng_bound(g, rng, rtol):
    return cheng_bound_check(g, rtol=rtol), {}


def _run_lower_bound(g, rng, rtol):
    return check_lower_bound(g, rtol=rtol), {}


def _run_laplacian_integral(g, rng, rtol):
    f = random_vertex_function(g, rng, scale=float(rng.uniform(0.5, 50.0)))
    return check_integral_identity(g, f, rtol=rtol), {"f": f.tolist()}


CHECKS = {
    "gradient_estimate": (_run_gradient_estimate, 1e-9),
    "alt_estimate": (_run_alt_estimate, 1e-9),
    "sqrt_comparison": (_run_sqrt_comparison, 1e-9),
    "sqrt_analog": (_run_sqrt_analog, 1e-9),
    "harnack": (_run_harnack, 1e-7),
    "path_functional_bound": (_run_path_functional_bound, 1e-9),
    "kernel_identities": (_run_kernel_identities, 1e-9),
    "kernel_comparison": (_run_kernel_comparison, 1e-9),
    "cheng_bound": (_run_cheng_bound, 1e-9),
    "lower_bound": (_run_lower_bound, 1e-9),
    "laplacian_integral": (_run_laplacian_integral, 1e-12),
}


def run_campaign(config: CampaignConfig) -> dict:
    """Run every configured check on every generated graph.

    Check errors are recorded per instance and do not abort the run. The
    report is written to ``config.output_path`` when set; treat a report
    with ``all_passed`` false (or any recorded error) as a failure.
    """
    unknown = [c for c in config.checks if c not in CHECKS]
    if unknown:
        raise MulapError(f"unknown checks: {unknown}; known: {sorted(CHECKS)}")

    start = time.perf_counter()
    aggregates = {
        name: {"name": name, "runs": 0, "passed": 0, "failed": 0,
               "errors": [], "worst_slack": None, "worst_witness": None}
        for name in config.checks
    }
    for index in range(config.n_graphs):
        g = generate(config, index)
        graph_json = None
        for name in config.checks:
            runner, default_rtol = CHECKS[name]
            rtol = float(config.tolerances.get(name, default_rtol))
            agg = aggregates[name]
            rng = rng_for(config.seed, index, zlib.crc32(name.encode()))
            try:
                report, inputs = runner(g, rng, rtol)
            except MulapError as exc:
                agg["errors"].append({"index": index, "error": f"{type(exc).__name__}: {exc}"})
                continue
            agg["runs"] += 1
            agg["passed" if report.passed else "failed"] += 1
            slack = report.slack
            if agg["worst_slack"] is None or slack < agg["worst_slack"]:
                if graph_json is None:
                    graph_json = graph_to_json(g)
                agg["worst_slack"] = slack
                agg["worst_witness"] = {
                    "index": index,
                    "graph": graph_json,
                    "inputs": inputs,
                    "report": report.as_dict(),
                }

    all_passed = all(
        agg["failed"] == 0 and not agg["errors"] and agg["runs"] > 0
        for agg in aggregates.values()
    ) if config.checks else True

    report = {
        "config": config.as_dict(),
        "versions": {
            "mulap": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": ".".join(str(p) for p in sys.version_info[:3]),
        },
        "checks": [aggregates[name] for name in config.checks],
        "all_passed": all_passed,
        "wall_clock_seconds": time.perf_counter() - start,
    }
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report
