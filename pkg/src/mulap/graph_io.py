"""Parsers and writers for graphs, vertex functions, and CSV exports.

Graph text format, one record per line ('#' starts a comment):

    graph <n_vertices>
    directed                    # optional; arcs are then listed one-way
    mu <vertex> <value>         # missing vertices default to mu = 1
    edge <u> <v> <w>

Vertices are either integers 0..n-1 throughout, or arbitrary labels
(assigned dense ids in order of first appearance; every vertex must then
appear somewhere). The JSON form mirrors the same fields:

    {"n": 3, "directed": false, "mu": [...], "edges": [[u, v, w], ...],
     "labels": [...] | null}

Vertex functions are lines "<vertex> <value>" or a JSON array aligned
with the vertex order.
"""

from __future__ import annotations

import csv
import json
import os
from typing import IO

import numpy as np

from .errors import IoError
from .graphs import WeightedGraph

__all__ = [
    "parse_graph_text",
    "parse_graph_json",
    "graph_to_text",
    "graph_to_json",
    "load_graph",
    "save_graph",
    "parse_vertex_function",
    "load_vertex_function",
    "write_heat_solution_csv",
    "write_heat_kernel_csv",
    "write_spectrum_csv",
    "write_eigenfunctions_csv",
]


def _records(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


class _VertexResolver:
    """Map file vertex tokens to dense ids 0..n-1."""

    def __init__(self, n):
        self.n = n
        self.by_label: dict[str, int] = {}
        self.all_int = True

    def resolve(self, token, lineno):
        if self.all_int:
            try:
                i = int(token)
            except ValueError:
                if self.by_label:
                    raise IoError(
                        f"line {lineno}: vertex {token!r} mixes labels with ids")
                self.all_int = False
            else:
                if not 0 <= i < self.n:
                    raise IoError(
                        f"line {lineno}: vertex {i} outside 0..{self.n - 1}")
                return i
        if token not in self.by_label:
            if len(self.by_label) >= self.n:
                raise IoError(
                    f"line {lineno}: more than {self.n} distinct vertex labels")
            self.by_label[token] = len(self.by_label)
        return self.by_label[token]

    def labels(self):
        if self.all_int:
            return None
        if len(self.by_label) < self.n:
            raise IoError(
                f"only {len(self.by_label)} of {self.n} labelled vertices appear")
        return [lab for lab, _ in sorted(self.by_label.items(), key=lambda kv: kv[1])]


def parse_graph_text(text: str) -> WeightedGraph:
    records = _records(text)
    try:
        lineno, head = next(records)
    except StopIteration:
        raise IoError("empty graph file") from None
    if head[0] != "graph" or len(head) != 2:
        raise IoError(f"line {lineno}: expected 'graph <n>', got {' '.join(head)!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise IoError(f"line {lineno}: bad vertex count {head[1]!r}") from None

    directed = False
    mu = {}
    edges = []
    resolver = _VertexResolver(n)
    for lineno, rec in records:
        kind = rec[0]
        if kind == "directed" and len(rec) == 1:
            directed = True
        elif kind == "mu" and len(rec) == 3:
            v = resolver.resolve(rec[1], lineno)
            try:
                mu[v] = float(rec[2])
            except ValueError:
                raise IoError(f"line {lineno}: bad measure {rec[2]!r}") from None
        elif kind == "edge" and len(rec) == 4:
            u = resolver.resolve(rec[1], lineno)
            v = resolver.resolve(rec[2], lineno)
            try:
                w = float(rec[3])
            except ValueError:
                raise IoError(f"line {lineno}: bad weight {rec[3]!r}") from None
            edges.append((u, v, w))
        else:
            raise IoError(f"line {lineno}: unrecognised record {' '.join(rec)!r}")

    labels = resolver.labels()
    mu_arr = np.ones(n)
    for v, value in mu.items():
        mu_arr[v] = value
    return WeightedGraph(n, edges, mu=mu_arr, directed=directed, labels=labels)


def parse_graph_json(obj) -> WeightedGraph:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise IoError(f"bad graph JSON: {exc}") from exc
    try:
        n = int(obj["n"])
        edges = [(int(u), int(v), float(w)) for u, v, w in obj.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise IoError(f"bad graph JSON: {exc}") from exc
    mu = obj.get("mu", 1.0)
    if isinstance(mu, dict):
        labels = obj.get("labels") or sorted(mu)
        index = {lab: i for i, lab in enumerate(labels)}
        arr = np.ones(n)
        for lab, value in mu.items():
            arr[index[lab]] = float(value)
        mu = arr
    else:
        labels = obj.get("labels")
    return WeightedGraph(n, edges, mu=mu,
                         directed=bool(obj.get("directed", False)), labels=labels)


def graph_to_text(g: WeightedGraph) -> str:
    lines = [f"graph {g.n}"]
    directed = not g.is_weight_symmetric
    if directed:
        lines.append("directed")
    for v in range(g.n):
        lines.append(f"mu {g.vertex_name(v)} {g.mu[v]!r}")
    for x, y, w in g.arcs():
        if directed or x < y:
            lines.append(f"edge {g.vertex_name(x)} {g.vertex_name(y)} {w!r}")
    return "\n".join(lines) + "\n"


def graph_to_json(g: WeightedGraph) -> dict:
    directed = not g.is_weight_symmetric
    edges = [[x, y, w] for x, y, w in g.arcs() if directed or x < y]
    return {
        "n": g.n,
        "directed": directed,
        "mu": [float(m) for m in g.mu],
        "edges": edges,
        "labels": list(g.labels) if g.labels else None,
    }


def _looks_like_json(path, text):
    if str(path).endswith(".json"):
        return True
    head = text.lstrip()[:1]
    return head in ("{", "[")


def load_graph(path) -> WeightedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if _looks_like_json(path, text):
        return parse_graph_json(text)
    return parse_graph_text(text)


def save_graph(g: WeightedGraph, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            if str(path).endswith(".json"):
                json.dump(graph_to_json(g), fh, indent=2)
                fh.write("\n")
            else:
                fh.write(graph_to_text(g))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def parse_vertex_function(g: WeightedGraph, text: str) -> np.ndarray:
    """Parse "<vertex> <value>" lines or a JSON array aligned to vertex order."""
    stripped = text.lstrip()
    if stripped[:1] == "[":
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise IoError(f"bad vertex function JSON: {exc}") from exc
        if len(values) != g.n:
            raise IoError(f"expected {g.n} values, got {len(values)}")
        return np.asarray(values, dtype=np.float64)
    out = np.full(g.n, np.nan)
    for lineno, rec in _records(text):
        if len(rec) != 2:
            raise IoError(f"line {lineno}: expected '<vertex> <value>'")
        try:
            out[g.vertex_id(rec[0])] = float(rec[1])
        except ValueError:
            raise IoError(f"line {lineno}: bad value {rec[1]!r}") from None
    if np.isnan(out).any():
        missing = int(np.flatnonzero(np.isnan(out))[0])
        raise IoError(f"no value for vertex {g.vertex_name(missing)}")
    return out


def load_vertex_function(g: WeightedGraph, path) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_vertex_function(g, fh.read())
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _open_for_write(dest):
    if hasattr(dest, "write"):
        return dest, False
    return open(dest, "w", newline="", encoding="utf-8"), True


def _write_rows(dest, header, rows):
    fh, owned = _open_for_write(dest)
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    finally:
        if owned:
            fh.close()


def write_heat_solution_csv(sol, dest: IO | str | os.PathLike) -> None:
    rows = (
        (float(t), v, float(sol.values[k, v]))
        for k, t in enumerate(sol.times)
        for v in range(sol.graph.n)
    )
    _write_rows(dest, ["t", "vertex", "value"], rows)


def write_heat_kernel_csv(kernel, dest: IO | str | os.PathLike) -> None:
    n = kernel.graph.n
    rows = (
        (kernel.t, x, y, float(kernel.entries[x, y]))
        for x in range(n)
        for y in range(n)
    )
    _write_rows(dest, ["t", "x", "y", "value"], rows)


def write_spectrum_csv(decomposition, dest: IO | str | os.PathLike) -> None:
    rows = ((k, float(lam)) for k, lam in enumerate(decomposition.eigenvalues))
    _write_rows(dest, ["index", "eigenvalue"], rows)


def write_eigenfunctions_csv(decomposition, dest: IO | str | os.PathLike) -> None:
    rows = (
        (k, v, float(decomposition.eigenfunctions[v, k]))
        for k in range(len(decomposition.eigenvalues))
        for v in range(decomposition.graph.n)
    )
    _write_rows(dest, ["index", "vertex", "value"], rows)
