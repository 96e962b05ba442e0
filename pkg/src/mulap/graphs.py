"""Finite weighted graphs, their metric structure, and structural constants.

A graph carries positive arc weights w_xy and a positive vertex measure
mu. Adjacency is always symmetric (every arc has a reverse arc), but the
two orientations may carry different weights; ``is_weight_symmetric``
records whether w_xy = w_yx throughout. The structural constants

    D_mu  = max_x deg(x) / mu(x),        deg(x) = sum_{y~x} w_xy
    d     = max_{x, y~x} mu(x) / w_xy
    D_w   = max_{x, y~x} deg(x) / w_xy
    N     = max_x #neighbours(x)
    a     = min_{x, y~x} mu(x) / w_xy,   b = d

drive every estimate in the package. Distances are hop counts.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import (
    DanglingEdge,
    Disconnected,
    NonpositiveMeasure,
    NonpositiveWeight,
    OneSidedEdge,
    SelfLoop,
    UnknownVertex,
)

__all__ = [
    "WeightedGraph",
    "GraphConstants",
    "ShortestPathDag",
    "validate",
    "constants",
    "dist",
    "ball_volume",
    "shortest_path_dag",
]


@dataclass(frozen=True)
class GraphConstants:
    """The finite sup/inf constants of a weighted graph.

    ``diameter`` is None when the graph is disconnected. On edgeless
    graphs the arc-indexed quantities degenerate to d = a = b = D_w = 0
    and w_min = +inf.
    """

    D_mu: float
    d: float
    D_w: float
    N: int
    a: float
    b: float
    mu_max: float
    w_min: float
    diameter: int | None

    def as_dict(self):
        return {
            "D_mu": self.D_mu,
            "d": self.d,
            "D_w": self.D_w,
            "N": self.N,
            "a": self.a,
            "b": self.b,
            "mu_max": self.mu_max,
            "w_min": self.w_min,
            "diameter": self.diameter,
        }


class WeightedGraph:
    """Immutable finite weighted graph with vertex measure.

    Vertices are dense integers 0..n-1; external string labels, when
    present, live in a side table and are accepted anywhere a vertex is.
    Arcs are stored in CSR form. Construction validates everything, so a
    constructed instance always satisfies the data-model invariants.

    Parameters
    ----------
    n : number of vertices.
    edges : iterables (u, v, w). With ``directed=False`` each item is an
        undirected edge contributing both arcs with the same weight; with
        ``directed=True`` each item is a single arc and the reverse arc
        must also be listed (its weight may differ).
    mu : positive vertex measure, scalar or length-n array (default 1).
    labels : optional external names, one per vertex.
    """

    def __init__(self, n, edges, mu=1.0, directed=False, labels=None):
        self.n = int(n)
        if self.n <= 0:
            raise DanglingEdge("graph needs at least one vertex")
        self.mu = np.ascontiguousarray(
            np.broadcast_to(np.asarray(mu, dtype=np.float64), (self.n,)),
            dtype=np.float64,
        ).copy()
        if not np.all(np.isfinite(self.mu)) or np.any(self.mu <= 0):
            bad = int(np.argmin(self.mu))
            raise NonpositiveMeasure(f"mu({bad}) = {self.mu[bad]} must be positive")

        src, dst, wgt = self._collect_arcs(edges, directed)
        order = np.lexsort((dst, src))
        src, dst, wgt = src[order], dst[order], wgt[order]
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(self.indptr, src + 1, 1)
        np.cumsum(self.indptr, out=self.indptr)
        self.indices = dst
        self.weights = wgt
        self._check_adjacency_symmetry()

        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != self.n or len(set(labels)) != self.n:
                raise DanglingEdge("labels must be unique, one per vertex")
        self.labels = labels
        self._label_index = (
            {lab: i for i, lab in enumerate(labels)} if labels else None
        )

        for arr in (self.mu, self.indptr, self.indices, self.weights):
            arr.setflags(write=False)
        self._cache: dict = {}
        # reentrant: cached builders call other cached properties
        self._lock = threading.RLock()

    def _collect_arcs(self, edges, directed):
        rows: list[tuple[int, int, float]] = []
        seen: set[tuple[int, int]] = set()
        for item in edges:
            u, v, w = item
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise SelfLoop(f"edge ({u}, {v}) is a self-loop")
            for z in (u, v):
                if not 0 <= z < self.n:
                    raise DanglingEdge(f"edge endpoint {z} outside 0..{self.n - 1}")
            if not (np.isfinite(w) and w > 0):
                raise NonpositiveWeight(f"edge ({u}, {v}) has weight {w}")
            pairs = [(u, v)] if directed else [(u, v), (v, u)]
            for p in pairs:
                if p in seen:
                    raise DanglingEdge(f"arc {p} listed twice")
                seen.add(p)
                rows.append((*p, w))
        if rows:
            arr = np.asarray(rows, dtype=np.float64)
            return (
                arr[:, 0].astype(np.int64),
                arr[:, 1].astype(np.int64),
                np.ascontiguousarray(arr[:, 2]),
            )
        empty_i = np.empty(0, dtype=np.int64)
        return empty_i, empty_i.copy(), np.empty(0, dtype=np.float64)

    def _check_adjacency_symmetry(self):
        # Every arc x->y needs the arc y->x; weights may differ.
        m = len(self.indices)
        if m == 0:
            return
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        fwd = set(zip(src.tolist(), self.indices.tolist()))
        for x, y in fwd:
            if (y, x) not in fwd:
                raise OneSidedEdge(f"arc ({x}, {y}) has no reverse arc ({y}, {x})")

    # -- vertex resolution ------------------------------------------------

    def vertex_id(self, v) -> int:
        """Resolve an int id or external label to a dense id."""
        if isinstance(v, str) and self._label_index is not None:
            try:
                return self._label_index[v]
            except KeyError:
                raise UnknownVertex(f"unknown vertex label {v!r}") from None
        try:
            i = int(v)
        except (TypeError, ValueError):
            raise UnknownVertex(f"unknown vertex {v!r}") from None
        if not 0 <= i < self.n:
            raise UnknownVertex(f"vertex {i} outside 0..{self.n - 1}")
        return i

    def vertex_name(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    # -- cached structure -------------------------------------------------

    def _cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def num_arcs(self) -> int:
        return len(self.indices)

    @property
    def degrees(self):
        """deg(x) = sum of outgoing arc weights."""
        from .kernels._pykernels import _segment_sum

        return self._cached("degrees", lambda: _segment_sum(self.weights.copy(), self.indptr))

    @property
    def neighbor_counts(self):
        return self._cached("ncounts", lambda: np.diff(self.indptr))

    @property
    def is_weight_symmetric(self) -> bool:
        """True iff w_xy = w_yx for every arc."""

        def check():
            if self.num_arcs == 0:
                return True
            src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
            fwd = np.lexsort((self.indices, src))
            rev = np.lexsort((src, self.indices))
            return bool(np.array_equal(src[fwd], self.indices[rev])
                        and np.allclose(self.weights[fwd], self.weights[rev],
                                        rtol=0.0, atol=0.0))

        return self._cached("symmetric", check)

    @property
    def is_connected(self) -> bool:
        def check():
            if self.n == 1:
                return True
            return bool((kernels.bfs_csr(self.indptr, self.indices, 0) >= 0).all())

        return self._cached("connected", check)

    def bfs_distances(self, source: int):
        """Hop distances from source, -1 for unreachable. Cached per source."""
        return self._cached(
            ("bfs", source),
            lambda: kernels.bfs_csr(self.indptr, self.indices, source),
        )

    def eccentricities(self):
        return self._cached(
            "ecc", lambda: kernels.eccentricities_csr(self.indptr, self.indices)
        )

    def diameter(self) -> int | None:
        """Max hop distance over pairs; None when disconnected."""

        def build():
            ecc = self.eccentricities()
            if (ecc < 0).any():
                return None
            return int(ecc.max())

        return self._cached("diameter", build)

    def arcs(self) -> Iterable[tuple[int, int, float]]:
        """Yield arcs (x, y, w_xy) in CSR order."""
        for x in range(self.n):
            for j in range(self.indptr[x], self.indptr[x + 1]):
                yield x, int(self.indices[j]), float(self.weights[j])

    def arc_weight(self, x: int, y: int) -> float:
        lo, hi = self.indptr[x], self.indptr[x + 1]
        j = np.searchsorted(self.indices[lo:hi], y)
        if j < hi - lo and self.indices[lo + j] == y:
            return float(self.weights[lo + j])
        raise UnknownVertex(f"no arc ({x}, {y})")

    def neighbors(self, x: int):
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    @property
    def constants(self) -> GraphConstants:
        return self._cached("constants", lambda: _compute_constants(self))

    def __repr__(self):
        kind = "symmetric" if self.is_weight_symmetric else "asymmetric"
        return f"WeightedGraph(n={self.n}, arcs={self.num_arcs}, {kind})"


def validate(g: WeightedGraph) -> None:
    """Re-check the data-model invariants of a constructed graph.

    Construction already enforces them; this is the explicit entry point
    for callers that unpickle or otherwise bypass the constructor.
    """
    if np.any(g.mu <= 0) or not np.all(np.isfinite(g.mu)):
        raise NonpositiveMeasure("vertex measure must be positive and finite")
    if g.num_arcs:
        if np.any(g.weights <= 0) or not np.all(np.isfinite(g.weights)):
            raise NonpositiveWeight("arc weights must be positive and finite")
        if np.any(g.indices < 0) or np.any(g.indices >= g.n):
            raise DanglingEdge("arc endpoint outside the vertex range")
        src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
        if np.any(src == g.indices):
            raise SelfLoop("self-loop present")
    g._check_adjacency_symmetry()


def _compute_constants(g: WeightedGraph) -> GraphConstants:
    deg = g.degrees
    D_mu = float(np.max(deg / g.mu))
    if g.num_arcs:
        src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
        ratio = g.mu[src] / g.weights
        d = float(ratio.max())
        a = float(ratio.min())
        D_w = float(np.max(deg[src] / g.weights))
        w_min = float(g.weights.min())
    else:
        d = a = D_w = 0.0
        w_min = float("inf")
    return GraphConstants(
        D_mu=D_mu,
        d=d,
        D_w=D_w,
        N=int(g.neighbor_counts.max()) if g.n else 0,
        a=a,
        b=d,
        mu_max=float(g.mu.max()),
        w_min=w_min,
        diameter=g.diameter() if g.is_connected else None,
    )


def constants(g: WeightedGraph) -> GraphConstants:
    """All structural sup/inf constants of ``g`` (diameter only if connected)."""
    return g.constants


def dist(g: WeightedGraph, x, y) -> int | float:
    """Hop-count distance; math.inf when x and y are in different components."""
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    d = int(g.bfs_distances(xi)[yi])
    return d if d >= 0 else float("inf")


def ball_volume(g: WeightedGraph, x, r: float) -> float:
    """Total measure of the closed ball: sum of mu(y) over dist(x,y) <= r."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    xi = g.vertex_id(x)
    dists = g.bfs_distances(xi)
    inside = (dists >= 0) & (dists <= int(np.floor(r)))
    return float(g.mu[inside].sum())


@dataclass(frozen=True)
class ShortestPathDag:
    """All shortest x->y paths, layered by distance from the source.

    ``layers[k]`` holds the vertices at distance k from the source that
    lie on at least one shortest path; ``arcs[k]`` the admissible
    transitions from layer k to layer k+1. Every source->target path
    through the DAG uses exactly ``length`` arcs, and the path set equals
    the set of shortest paths.
    """

    source: int
    target: int
    length: int
    layers: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[tuple[int, int], ...], ...]

    def successors(self, k: int, v: int) -> list[int]:
        return [b for (a, b) in self.arcs[k] if a == v]

    def enumerate_paths(self):
        """Yield every shortest path as a vertex list (exponential; small graphs)."""
        succ = []
        for k in range(self.length):
            table: dict[int, list[int]] = {}
            for a, b in self.arcs[k]:
                table.setdefault(a, []).append(b)
            succ.append(table)

        def walk(k, v, prefix):
            if k == self.length:
                yield prefix
                return
            for w in succ[k][v]:
                yield from walk(k + 1, w, prefix + [w])

        yield from walk(0, self.source, [self.source])

    def count_paths(self) -> int:
        counts = {self.source: 1}
        for k in range(self.length):
            nxt: dict[int, int] = {}
            for a, b in self.arcs[k]:
                nxt[b] = nxt.get(b, 0) + counts[a]
            counts = nxt
        return counts.get(self.target, 1 if self.length == 0 else 0)


def shortest_path_dag(g: WeightedGraph, x, y) -> ShortestPathDag:
    """Layered DAG whose source->target paths are exactly the shortest paths."""
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    d_from = g.bfs_distances(xi)
    if d_from[yi] < 0:
        raise Disconnected(f"vertices {x} and {y} are in different components")
    length = int(d_from[yi])
    d_to = g.bfs_distances(yi)
    on_path = (d_from >= 0) & (d_to >= 0) & (d_from + d_to == length)

    layers = []
    for k in range(length + 1):
        layer = np.flatnonzero(on_path & (d_from == k))
        layers.append(tuple(int(v) for v in layer))
    arcs = []
    for k in range(length):
        step = []
        for v in layers[k]:
            for w in g.neighbors(v):
                w = int(w)
                if on_path[w] and d_from[w] == k + 1:
                    step.append((v, w))
        arcs.append(tuple(step))
    return ShortestPathDag(
        source=xi, target=yi, length=length,
        layers=tuple(layers), arcs=tuple(arcs),
    )
