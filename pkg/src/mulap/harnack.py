"""Space-time Harnack comparison along shortest paths, and the kernel bounds.

A positive solution of L u - du/dt <= q u satisfies, for T1 < T2,

    u(x, T1) <= u(y, T2) * exp{ drift + distance + potential }

    drift     = (D_mu + sqrt(D_mu/d)) (T2 - T1)
    distance  = dist(x,y)^2 / (T2 - T1) * sqrt(d mu_max / w_min)
    potential = min over shortest paths x = x_0, ..., x_l = y of
                sum_k [ int q(x_k, t) dt
                        + l^2/(T2-T1)^2 int (t - t_k)^2 (q(x_{k+1}, t) - q(x_k, t)) dt ]

with the uniform grid t_k = T1 + k (T2 - T1)/l. The path minimum is an
exact dynamic program over the layered shortest-path DAG. For |q| <= C0
the potential term telescopes into (5/3) C0 (T2 - T1), giving the
closed-form bounded variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import (
    AsymmetricWeights,
    BadParameters,
    Disconnected,
    GridMismatch,
    ResidualTooLarge,
)
from .graphs import WeightedGraph, dist, shortest_path_dag
from .heat import (
    HeatSolution,
    Potential,
    as_potential,
    heat_kernel,
    pde_residual,
    residual_tolerance,
)
from .reports import CheckReport, build_report

__all__ = [
    "HarnackBound",
    "segment_cost",
    "min_path_functional",
    "harnack_bound",
    "bounded_q_bound",
    "check_harnack",
    "check_kernel_comparison",
    "kernel_upper_bound",
    "psi",
]

DEFAULT_PANELS = 64


@dataclass
class HarnackBound:
    """The three exponent terms, their exp, and one minimising path."""

    drift_term: float
    distance_term: float
    potential_term: float
    total_factor: float
    minimizing_path: list[int]

    @property
    def exponent(self) -> float:
        return self.drift_term + self.distance_term + self.potential_term

    def as_dict(self) -> dict:
        return {
            "drift_term": self.drift_term,
            "distance_term": self.distance_term,
            "potential_term": self.potential_term,
            "exponent": self.exponent,
            "total_factor": self.total_factor,
            "minimizing_path": list(self.minimizing_path),
        }


def _drift_coefficient(g: WeightedGraph) -> float:
    c = g.constants
    if g.num_arcs == 0:
        return 0.0
    return c.D_mu + np.sqrt(c.D_mu / c.d)


def segment_cost(q, x_k, x_k1, t_k, t_k1, length, t1, t2, *,
                 panels: int = DEFAULT_PANELS) -> float:
    """Cost of one hop of the path functional on [t_k, t_k1].

    Exact closed form q(x_k) dt + (dt/3)(q(x_k1) - q(x_k)) for potentials
    constant in time; composite Simpson with ``panels`` panels otherwise.
    The times must sit on the uniform grid T1 + k (T2 - T1)/length.
    """
    if not isinstance(q, Potential):
        raise BadParameters("q must be a Potential (use as_potential)")
    span = t2 - t1
    if span <= 0 or length < 1:
        raise GridMismatch("need T1 < T2 and a path of at least one hop")
    step = span / length
    k = (t_k - t1) / step
    if abs(k - round(k)) > 1e-9 * (1.0 + abs(k)) or not -1e-9 <= round(k) <= length - 1:
        raise GridMismatch(f"t_k={t_k} is not on the uniform grid")
    if abs(t_k1 - t_k - step) > 1e-9 * step:
        raise GridMismatch(f"segment [{t_k}, {t_k1}] does not span one grid step")

    if q.is_time_constant:
        qv = q.constant_values()
        return float(qv[x_k] * step + (step / 3.0) * (qv[x_k1] - qv[x_k]))

    if panels % 2 or panels < 2:
        raise BadParameters("Simpson needs an even panel count >= 2")
    ts = np.linspace(t_k, t_k1, panels + 1)
    q_lo = np.empty(panels + 1)
    q_hi = np.empty(panels + 1)
    for i, t in enumerate(ts):
        row = q.at(t)
        q_lo[i] = row[x_k]
        q_hi[i] = row[x_k1]
    first = simpson(q_lo, x=ts)
    second = simpson((ts - t_k) ** 2 * (q_hi - q_lo), x=ts)
    return float(first + (length ** 2 / span ** 2) * second)


def min_path_functional(g: WeightedGraph, x, y, t1: float, t2: float,
                        q=None, *, panels: int = DEFAULT_PANELS):
    """Exact minimum of the path functional over all shortest x->y paths.

    Returns (value, path). Dynamic program over the layered DAG; hop k of
    every path is priced on the k-th segment of the uniform time grid.
    """
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    if t2 <= t1:
        raise BadParameters("need T1 < T2")
    pot = as_potential(g, q)
    if xi == yi:
        return 0.0, [xi]
    dag = shortest_path_dag(g, xi, yi)
    length = dag.length
    step = (t2 - t1) / length
    times = [t1 + k * step for k in range(length + 1)]

    if pot.is_time_constant:
        qv = pot.constant_values()

        def arc_cost(k, v, w):
            return step * ((2.0 / 3.0) * qv[v] + qv[w] / 3.0)
    else:
        def arc_cost(k, v, w):
            return segment_cost(pot, v, w, times[k], times[k + 1],
                                length, t1, t2, panels=panels)

    costs: list[dict[int, float]] = [{xi: 0.0}]
    parents: list[dict[int, int]] = [{}]
    for k in range(length):
        ck: dict[int, float] = {}
        pk: dict[int, int] = {}
        for v, w in dag.arcs[k]:
            cand = costs[k][v] + arc_cost(k, v, w)
            if w not in ck or cand < ck[w]:
                ck[w] = cand
                pk[w] = v
        costs.append(ck)
        parents.append(pk)

    path = [yi]
    for k in range(length, 0, -1):
        path.append(parents[k][path[-1]])
    path.reverse()
    return float(costs[length][yi]), path


def harnack_bound(g: WeightedGraph, x, y, t1: float, t2: float, q=None, *,
                  panels: int = DEFAULT_PANELS) -> HarnackBound:
    """Assemble the three exponent terms for the pair (x, T1), (y, T2)."""
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    if t2 <= t1:
        raise BadParameters("need T1 < T2")
    c = g.constants
    span = t2 - t1
    hops = dist(g, xi, yi)
    if not np.isfinite(hops):
        raise Disconnected(f"vertices {x} and {y} are in different components")
    drift = _drift_coefficient(g) * span
    distance = 0.0
    if hops > 0:
        distance = hops ** 2 / span * np.sqrt(c.d * c.mu_max / c.w_min)
    potential, path = min_path_functional(g, xi, yi, t1, t2, q, panels=panels)
    return HarnackBound(
        drift_term=float(drift),
        distance_term=float(distance),
        potential_term=float(potential),
        total_factor=float(np.exp(drift + distance + potential)),
        minimizing_path=path,
    )


def bounded_q_bound(g: WeightedGraph, x, y, t1: float, t2: float,
                    c0: float) -> float:
    """Closed-form factor for |q| <= C0: the potential term becomes (5/3) C0 (T2-T1)."""
    if t2 <= t1:
        raise BadParameters("need T1 < T2")
    if c0 < 0:
        raise BadParameters("C0 must be nonnegative")
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    c = g.constants
    span = t2 - t1
    hops = dist(g, xi, yi)
    if not np.isfinite(hops):
        raise Disconnected(f"vertices {x} and {y} are in different components")
    exponent = (_drift_coefficient(g) + (5.0 / 3.0) * c0) * span
    if hops > 0:
        exponent += hops ** 2 / span * np.sqrt(c.d * c.mu_max / c.w_min)
    return float(np.exp(exponent))


def check_harnack(sol: HeatSolution, sample_pairs=None, *,
                  min_gap: float = 0.1, rtol: float = 1e-7,
                  panels: int = DEFAULT_PANELS) -> CheckReport:
    """Check u(x,T1) <= u(y,T2) * factor on grid pairs of a certified solution.

    With ``sample_pairs=None`` and a time-constant potential, every
    vertex pair is checked against every grid-time pair (T2 - T1 >=
    min_gap), using one DAG minimisation per vertex pair; the report then
    keeps the worst time pair for each vertex pair. Explicit pairs are
    given as ((x, T1), (y, T2)) with grid times.

    The allowance is rtol * (1 + rhs) plus a term proportional to the
    solution's PDE residual.
    """
    g = sol.graph
    res = pde_residual(sol)
    allowed = residual_tolerance(sol.method)
    if res > allowed:
        raise ResidualTooLarge(
            f"solution residual {res:.3e} exceeds {allowed:.3e} for method {sol.method}"
        )
    scale = float(np.abs(sol.values).max())
    atol = 10.0 * res * (1.0 + scale)

    if sample_pairs is not None:
        lhs, rhs, witnesses = [], [], []
        for (x, t1), (y, t2) in sample_pairs:
            xi, yi = g.vertex_id(x), g.vertex_id(y)
            k1, k2 = sol.time_index(t1), sol.time_index(t2)
            if not sol.times[k2] > sol.times[k1]:
                raise BadParameters("pairs need T1 < T2")
            factor = harnack_bound(g, xi, yi, sol.times[k1], sol.times[k2],
                                   sol.potential, panels=panels).total_factor
            lhs.append(sol.values[k1, xi])
            rhs.append(sol.values[k2, yi] * factor)
            witnesses.append({"x": xi, "y": yi,
                              "t1": float(sol.times[k1]), "t2": float(sol.times[k2])})
        return build_report("harnack", lhs, rhs, rtol, atol=atol,
                            witnesses=lambda i: witnesses[i])

    if not sol.potential.is_time_constant:
        raise BadParameters("pass explicit sample_pairs for time-dependent q")

    qv = sol.potential.constant_values()
    times = sol.times
    gap = times[None, :] - times[:, None]
    mask = gap >= min_gap - 1e-12
    if not mask.any():
        raise BadParameters(f"no grid pairs with T2 - T1 >= {min_gap}")
    drift_coef = _drift_coefficient(g)
    c = g.constants
    dist_coef = np.sqrt(c.d * c.mu_max / c.w_min) if g.num_arcs else 0.0

    lhs_list, rhs_list, witnesses = [], [], []
    for xi in range(g.n):
        hop_row = g.bfs_distances(xi)
        for yi in range(g.n):
            hops = int(hop_row[yi])
            if hops < 0:
                raise Disconnected(
                    f"vertices {xi} and {yi} are in different components")
            if hops == 0:
                path_rate = 0.0
            else:
                score, _ = min_path_functional(g, xi, yi, 0.0, float(hops), qv)
                path_rate = score / hops  # functional per unit time
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                exponent = (drift_coef + path_rate) * gap
                if hops > 0:
                    exponent = exponent + hops ** 2 * dist_coef / gap
                rhs_mat = sol.values[:, yi][None, :] * np.exp(exponent)
            lhs_mat = np.broadcast_to(sol.values[:, xi][:, None], rhs_mat.shape)
            excess = np.where(mask, lhs_mat - rhs_mat - rtol * (1.0 + np.abs(rhs_mat)) - atol,
                              -np.inf)
            k1, k2 = np.unravel_index(int(np.argmax(excess)), excess.shape)
            lhs_list.append(float(lhs_mat[k1, k2]))
            rhs_list.append(float(rhs_mat[k1, k2]))
            witnesses.append({"x": xi, "y": yi,
                              "t1": float(times[k1]), "t2": float(times[k2])})
    return build_report("harnack", lhs_list, rhs_list, rtol, atol=atol,
                        witnesses=lambda i: witnesses[i])


def check_kernel_comparison(g: WeightedGraph, x, y, t: float, delta: float, *,
                            rtol: float = 1e-9) -> CheckReport:
    """Check the ball-averaged kernel comparison

    Vol(B_x(sqrt t)) P_t(x,y) <=
        exp{(D_mu + sqrt(D_mu/d)) delta t + (1/delta) sqrt(d mu_max/w_min)}
        * sum_{x' in B_x(sqrt t)} mu(x') P_{(1+delta)t}(x', y).
    """
    if not g.is_weight_symmetric:
        raise AsymmetricWeights("kernel comparison needs w_xy = w_yx")
    if t <= 0 or delta <= 0:
        raise BadParameters("need t > 0 and delta > 0")
    xi, yi = g.vertex_id(x), g.vertex_id(y)
    c = g.constants
    radius = int(np.floor(np.sqrt(t)))
    dists = g.bfs_distances(xi)
    ball = np.flatnonzero((dists >= 0) & (dists <= radius))
    vol = float(g.mu[ball].sum())

    P_t = heat_kernel(g, t).entries
    P_later = heat_kernel(g, (1.0 + delta) * t).entries
    factor = np.exp(_drift_coefficient(g) * delta * t
                    + (1.0 / delta) * np.sqrt(c.d * c.mu_max / c.w_min))
    lhs = vol * P_t[xi, yi]
    rhs = factor * float(np.dot(g.mu[ball], P_later[ball, yi]))
    report = build_report("kernel_comparison", [lhs], [rhs], rtol,
                          witnesses=lambda i: {"x": xi, "y": yi,
                                               "t": t, "delta": delta})
    report.extra["ball"] = [int(v) for v in ball]
    return report


def kernel_upper_bound(g: WeightedGraph, x, y, t: float, c1: float,
                       eps: float, gamma: float) -> float:
    """Evaluate the diagonal-decay upper bound for the heat kernel.

    The constant c1 comes from an integrated Gaussian-type kernel lemma
    and is a required input here; the aggregate constant is

        C2 = D_mu eps + sqrt(D_mu/d) eps + (4/eps) sqrt(d mu_max/w_min) + c1/eps

    and the bound, with lambda* the bottom of the spectrum, reads

        exp(-(1-gamma) lambda* t) / sqrt(Vol(B_x(sqrt t)) Vol(B_y(sqrt t)))
        * exp{ C2 sqrt(t) - c1 dist(x,y)^2 / (4 (1 + 2 eps) t) }.
    """
    if t < 1:
        raise BadParameters("the bound needs t >= 1")
    if not 0 < gamma <= 1:
        raise BadParameters("need 0 < gamma <= 1")
    if eps <= 0 or c1 <= 0:
        raise BadParameters("need eps > 0 and c1 > 0")
    from .spectral import eigendecompose

    xi, yi = g.vertex_id(x), g.vertex_id(y)
    c = g.constants
    lam_star = max(float(eigendecompose(g).eigenvalues[0]), 0.0)
    c2 = (c.D_mu * eps + np.sqrt(c.D_mu / c.d) * eps
          + (4.0 / eps) * np.sqrt(c.d * c.mu_max / c.w_min) + c1 / eps)
    radius = int(np.floor(np.sqrt(t)))
    vols = []
    for v in (xi, yi):
        dv = g.bfs_distances(v)
        vols.append(float(g.mu[(dv >= 0) & (dv <= radius)].sum()))
    hops = dist(g, xi, yi)
    if not np.isfinite(hops):
        raise Disconnected(f"vertices {x} and {y} are in different components")
    return float(np.exp(-(1.0 - gamma) * lam_star * t)
                 / np.sqrt(vols[0] * vols[1])
                 * np.exp(c2 * np.sqrt(t)
                          - c1 * hops ** 2 / (4.0 * (1.0 + 2.0 * eps) * t)))


def psi(sol: HeatSolution, x, y, t: float) -> float:
    """Diagnostic sqrt(|u(x,t)/u(y,t) - 1|) at the nearest grid time."""
    g = sol.graph
    k = sol.time_index(t)
    ux = sol.values[k, g.vertex_id(x)]
    uy = sol.values[k, g.vertex_id(y)]
    return float(np.sqrt(abs(ux / uy - 1.0)))
