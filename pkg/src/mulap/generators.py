"""Deterministic random graphs and vertex functions for verification campaigns.

Everything is keyed by (seed, index): the same pair always reproduces
the same graph, independent of scheduling, so failing cases replay
standalone. Families produce an edge skeleton; weight and measure
schemes then decorate it.
"""

from __future__ import annotations

import numpy as np

from .errors import BadParameters, GenerationExhausted
from .graphs import WeightedGraph

__all__ = [
    "rng_for",
    "generate",
    "family_graph",
    "random_vertex_function",
    "random_positive_function",
]

MAX_CONNECTIVITY_RETRIES = 200


def rng_for(seed: int, *stream) -> np.random.Generator:
    """Generator for one (seed, stream...) address."""
    return np.random.default_rng([int(seed), *[int(s) for s in stream]])


def _path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def _cycle_edges(n):
    # C_2 degenerates to a single edge: duplicate pairs would be a multigraph
    if n <= 2:
        return _path_edges(n)
    return _path_edges(n) + [(n - 1, 0)]


def _complete_edges(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _grid_edges(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return edges


def _erdos_renyi_edges(n, p, rng):
    mask = rng.random(n * (n - 1) // 2) < p
    return [e for e, keep in zip(_complete_edges(n), mask) if keep]


def _is_connected_skeleton(n, edges):
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(n)}) == 1


def _draw_n(family, rng):
    if "n" in family:
        return int(family["n"])
    n_min = int(family.get("n_min", 2))
    n_max = int(family.get("n_max", n_min))
    return int(rng.integers(n_min, n_max + 1))


def _skeleton(family: dict, rng) -> tuple[int, list]:
    name = family["name"]
    if name == "path":
        n = _draw_n(family, rng)
        return n, _path_edges(n)
    if name == "cycle":
        n = _draw_n(family, rng)
        return n, _cycle_edges(n)
    if name == "complete":
        n = _draw_n(family, rng)
        return n, _complete_edges(n)
    if name == "grid":
        if "rows" in family:
            rows, cols = int(family["rows"]), int(family["cols"])
        else:
            n = _draw_n(family, rng)
            rows = max(1, int(np.sqrt(n)))
            cols = max(1, n // rows)
        return rows * cols, _grid_edges(rows, cols)
    if name == "erdos_renyi":
        n = _draw_n(family, rng)
        p = family.get("p")
        if p is None:
            p = min(1.0, (np.log(max(n, 2)) + 2.0) / max(n, 2))
        require_connected = bool(family.get("require_connected", True))
        for _ in range(MAX_CONNECTIVITY_RETRIES):
            edges = _erdos_renyi_edges(n, float(p), rng)
            if not require_connected or _is_connected_skeleton(n, edges):
                return n, edges
        raise GenerationExhausted(
            f"no connected G({n}, {p}) after {MAX_CONNECTIVITY_RETRIES} draws")
    raise BadParameters(f"unknown graph family {name!r}")


def _weights(edges, scheme: dict, rng):
    name = scheme["name"]
    if name == "unit":
        return [1.0] * len(edges)
    if name == "log_uniform":
        low = float(scheme.get("low", 0.1))
        high = float(scheme.get("high", 10.0))
        return list(np.exp(rng.uniform(np.log(low), np.log(high), size=len(edges))))
    raise BadParameters(f"unknown weight scheme {name!r}")


def _measures(n, weighted_edges, scheme: dict, rng):
    name = scheme["name"]
    if name == "unit":
        return np.ones(n)
    if name == "degree":
        deg = np.zeros(n)
        for u, v, w in weighted_edges:
            deg[u] += w
            deg[v] += w
        if np.any(deg <= 0):
            raise BadParameters("degree measure needs every vertex to have an edge")
        return deg
    if name == "log_uniform":
        low = float(scheme.get("low", 0.1))
        high = float(scheme.get("high", 10.0))
        return np.exp(rng.uniform(np.log(low), np.log(high), size=n))
    raise BadParameters(f"unknown measure scheme {name!r}")


def _norm(scheme) -> dict:
    if isinstance(scheme, str):
        return {"name": scheme}
    return dict(scheme)


def generate(config, index: int) -> WeightedGraph:
    """Deterministic graph number ``index`` of a campaign configuration.

    ``config`` needs ``seed``, ``graph_family``, ``weight_scheme`` and
    ``measure_scheme`` attributes or keys (see CampaignConfig).
    """
    get = (lambda k: getattr(config, k)) if hasattr(config, "seed") else config.__getitem__
    family = _norm(get("graph_family"))
    if family["name"] == "custom_file":
        from .graph_io import load_graph

        return load_graph(family["path"])
    rng = rng_for(get("seed"), index)
    n, edges = _skeleton(family, rng)
    weights = _weights(edges, _norm(get("weight_scheme")), rng)
    weighted = [(u, v, w) for (u, v), w in zip(edges, weights)]
    mu = _measures(n, weighted, _norm(get("measure_scheme")), rng)
    return WeightedGraph(n, weighted, mu=mu)


def family_graph(name: str, *, seed: int = 0, weight_scheme="unit",
                 measure_scheme="unit", **params) -> WeightedGraph:
    """One-off graph from a family; convenience wrapper over ``generate``."""
    cfg = {
        "seed": seed,
        "graph_family": {"name": name, **params},
        "weight_scheme": weight_scheme,
        "measure_scheme": measure_scheme,
    }
    return generate(cfg, 0)


def random_positive_function(g: WeightedGraph, rng, low: float = 0.01,
                             high: float = 100.0) -> np.ndarray:
    """Log-uniform positive vertex function in [low, high]."""
    return np.exp(rng.uniform(np.log(low), np.log(high), size=g.n))


def random_vertex_function(g: WeightedGraph, rng, scale: float = 1.0) -> np.ndarray:
    """Signed vertex function, uniform in [-scale, scale]."""
    return rng.uniform(-scale, scale, size=g.n)
