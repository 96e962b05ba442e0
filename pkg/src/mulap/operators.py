"""The mu-Laplacian, the gradient form, and the pointwise estimates built on them.

For f, h on the vertices of a weighted graph,

    (L f)(x)      = (1/mu(x))   sum_{y~x} w_xy (f(y) - f(x))
    Gamma(f,h)(x) = (1/(2mu(x))) sum_{y~x} w_xy (f(y) - f(x)) (h(y) - h(x))

and for every positive u the global estimate

    sqrt(2 Gamma(u)) / u  <=  sqrt(d) Lu/u + sqrt(d) D_mu + sqrt(D_mu)

holds with the structural constants of :mod:`mulap.graphs`. The check_*
functions evaluate both sides pointwise and return a
:class:`~mulap.reports.CheckReport`; the inequalities are exact, so the
default allowance 1e-9 * (1 + |rhs|) only absorbs rounding.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import (
    AsymmetricWeights,
    BadParameters,
    HypothesisViolated,
    LengthMismatch,
    NonpositiveFunction,
    Overflow,
    ResidualTooLarge,
)
from .graphs import WeightedGraph
from .reports import CheckReport, build_report

__all__ = [
    "laplacian",
    "gamma",
    "check_gradient_estimate",
    "check_case",
    "check_alt_estimate",
    "check_sqrt_comparison",
    "check_bhlly_analog",
    "integral_of_laplacian",
    "check_integral_identity",
]

DEFAULT_POS_FLOOR = 1e-12
DEFAULT_RTOL = 1e-9
HYPOTHESIS_RTOL = 1e-12


def as_vertex_function(g: WeightedGraph, f) -> np.ndarray:
    """Coerce to a float64 vector aligned with the graph's vertex order."""
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(g.n, float(arr))
    if arr.shape != (g.n,):
        raise LengthMismatch(f"expected {g.n} values, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def require_positive(g: WeightedGraph, u, pos_floor: float = DEFAULT_POS_FLOOR) -> np.ndarray:
    u = as_vertex_function(g, u)
    if not np.all(u >= pos_floor):
        bad = int(np.argmin(u))
        raise NonpositiveFunction(
            f"u({bad}) = {u[bad]} is below the positivity floor {pos_floor}"
        )
    return u


def laplacian(g: WeightedGraph, f) -> np.ndarray:
    """Apply the mu-Laplacian to f."""
    f = as_vertex_function(g, f)
    return kernels.laplacian_csr(g.indptr, g.indices, g.weights, g.mu, f)


def gamma(g: WeightedGraph, f, h=None) -> np.ndarray:
    """Gradient form Gamma(f, h); Gamma(f) = Gamma(f, f) when h is omitted."""
    f = as_vertex_function(g, f)
    h = f if h is None else as_vertex_function(g, h)
    return kernels.gamma_csr(g.indptr, g.indices, g.weights, g.mu, f, h)


def _gradient_sides(g, u):
    c = g.constants
    lhs = np.sqrt(2.0 * np.maximum(gamma(g, u), 0.0)) / u
    rhs = np.sqrt(c.d) * laplacian(g, u) / u + np.sqrt(c.d) * c.D_mu + np.sqrt(c.D_mu)
    return lhs, rhs


def check_gradient_estimate(g: WeightedGraph, u, *,
                            pos_floor: float = DEFAULT_POS_FLOOR,
                            rtol: float = DEFAULT_RTOL) -> CheckReport:
    """Check sqrt(2 Gamma(u))/u <= sqrt(d) Lu/u + sqrt(d) D_mu + sqrt(D_mu)."""
    u = require_positive(g, u, pos_floor)
    lhs, rhs = _gradient_sides(g, u)
    return build_report("gradient_estimate", lhs, rhs, rtol)


def _check_hypothesis(name, defect, scale, rtol=HYPOTHESIS_RTOL):
    # defect <= 0 is required pointwise; allow rounding on the stated scale
    allow = rtol * (1.0 + scale)
    excess = defect - allow
    i = int(np.argmax(excess))
    if excess[i] > 0:
        raise HypothesisViolated(
            f"{name}: differential inequality fails at vertex {i} "
            f"(defect {defect[i]:.6e})",
            witness=i,
            excess=float(excess[i]),
        )


def check_case(g: WeightedGraph, u, case: str, *,
               potential=None, coefficient=None, exponent=None,
               log_coefficient=None, du_dt=None,
               pos_floor: float = DEFAULT_POS_FLOOR,
               rtol: float = DEFAULT_RTOL) -> CheckReport:
    """Check one of the four specialised gradient estimates.

    Each case assumes a differential inequality and sharpens the left
    side accordingly; the hypothesis is verified pointwise first and a
    failure raises :class:`HypothesisViolated` with the offending vertex.

    case "i"   : L u <= q u             with q = ``potential``;
                 lhs gains -sqrt(d) q.
    case "ii"  : L u <= h u^alpha       with h = ``coefficient``,
                 alpha = ``exponent``; lhs gains -sqrt(d) h u^(alpha-1).
    case "iii" : L u - du/dt <= q u     with ``du_dt`` supplied by the
                 caller; lhs gains -sqrt(d) du/dt / u - sqrt(d) q.
    case "iv"  : L u - du/dt + a u ln u <= 0 with a = ``log_coefficient``;
                 this is case "iii" with q = -a ln u, so the lhs gains
                 -sqrt(d) du/dt / u + sqrt(d) a ln u.

    The rhs is always sqrt(d) D_mu + sqrt(D_mu).
    """
    u = require_positive(g, u, pos_floor)
    c = g.constants
    sqrt_d = np.sqrt(c.d)
    Lu = laplacian(g, u)
    base = np.sqrt(2.0 * np.maximum(gamma(g, u), 0.0)) / u
    rhs = np.full(g.n, sqrt_d * c.D_mu + np.sqrt(c.D_mu))

    if case == "i":
        if potential is None:
            raise BadParameters("case 'i' needs potential=q")
        q = as_vertex_function(g, potential)
        _check_hypothesis("case i", Lu - q * u, np.abs(Lu) + np.abs(q * u))
        lhs = base - sqrt_d * q
    elif case == "ii":
        if coefficient is None or exponent is None:
            raise BadParameters("case 'ii' needs coefficient=h and exponent=alpha")
        h = as_vertex_function(g, coefficient)
        alpha = float(exponent)
        with np.errstate(over="raise", divide="raise"):
            try:
                u_alpha = u ** alpha
                u_alpha_m1 = u ** (alpha - 1.0)
            except FloatingPointError as exc:
                raise Overflow(f"u**alpha overflows for alpha={alpha}") from exc
        if not (np.all(np.isfinite(h * u_alpha)) and np.all(np.isfinite(h * u_alpha_m1))):
            raise Overflow(f"h*u**(alpha-1) is not finite for alpha={alpha}")
        _check_hypothesis("case ii", Lu - h * u_alpha, np.abs(Lu) + np.abs(h * u_alpha))
        lhs = base - sqrt_d * h * u_alpha_m1
    elif case == "iii":
        if potential is None or du_dt is None:
            raise BadParameters("case 'iii' needs potential=q and du_dt")
        q = as_vertex_function(g, potential)
        ut = as_vertex_function(g, du_dt)
        _check_hypothesis("case iii", Lu - ut - q * u,
                          np.abs(Lu) + np.abs(ut) + np.abs(q * u))
        lhs = base - sqrt_d * ut / u - sqrt_d * q
    elif case == "iv":
        if log_coefficient is None or du_dt is None:
            raise BadParameters("case 'iv' needs log_coefficient=a and du_dt")
        a = float(log_coefficient)
        ut = as_vertex_function(g, du_dt)
        log_u = np.log(u)
        _check_hypothesis("case iv", Lu - ut + a * u * log_u,
                          np.abs(Lu) + np.abs(ut) + np.abs(a * u * log_u))
        lhs = base - sqrt_d * ut / u + sqrt_d * a * log_u
    else:
        raise BadParameters(f"unknown case {case!r}; expected 'i'..'iv'")

    return build_report(f"case_{case}", lhs, rhs, rtol)


def check_alt_estimate(g: WeightedGraph, u, *,
                       pos_floor: float = DEFAULT_POS_FLOOR,
                       rtol: float = DEFAULT_RTOL) -> CheckReport:
    """Check the degree-count variant:

    sqrt(2 Gamma(u))/u <= sqrt(b) Lu/u + sqrt(b) (N/a + sqrt(N/(a b))).
    """
    u = require_positive(g, u, pos_floor)
    c = g.constants
    lhs = np.sqrt(2.0 * np.maximum(gamma(g, u), 0.0)) / u
    if g.num_arcs == 0:
        rhs = np.zeros(g.n)
    else:
        sqrt_b = np.sqrt(c.b)
        rhs = (sqrt_b * laplacian(g, u) / u
               + sqrt_b * (c.N / c.a + np.sqrt(c.N / (c.a * c.b))))
    return build_report("alt_estimate", lhs, rhs, rtol)


def check_sqrt_comparison(g: WeightedGraph, u, *,
                          pos_floor: float = DEFAULT_POS_FLOOR,
                          rtol: float = DEFAULT_RTOL) -> CheckReport:
    """Check 2 Gamma(sqrt(u)) <= sqrt(D_mu) * sqrt(2 Gamma(u)) pointwise."""
    u = require_positive(g, u, pos_floor)
    c = g.constants
    lhs = 2.0 * gamma(g, np.sqrt(u))
    rhs = np.sqrt(c.D_mu) * np.sqrt(2.0 * np.maximum(gamma(g, u), 0.0))
    return build_report("sqrt_comparison", lhs, rhs, rtol)


def check_bhlly_analog(sol, *, pos_floor: float = DEFAULT_POS_FLOOR,
                       rtol: float = DEFAULT_RTOL) -> CheckReport:
    """Check the square-root estimate along a heat solution.

    For u solving L u - du/dt - q u = 0, every grid time must satisfy

        Gamma(sqrt(u))/u - sqrt(D_mu d) d(sqrt u)/dt / sqrt(u)
            - sqrt(D_mu d) q/2  <=  D_mu (sqrt(D_mu d) + 1) / 2

    with d(sqrt u)/dt taken as (du/dt) / (2 sqrt u) and du/dt recovered
    from the equation. The solution's PDE residual is verified against
    the solver's published tolerance first.
    """
    from .heat import pde_residual, residual_tolerance, time_derivative

    g = sol.graph
    res = pde_residual(sol)
    allowed = residual_tolerance(sol.method)
    if res > allowed:
        raise ResidualTooLarge(
            f"solution residual {res:.3e} exceeds {allowed:.3e} for method {sol.method}"
        )
    c = g.constants
    root_dd = np.sqrt(c.D_mu * c.d)
    rhs_const = c.D_mu * (root_dd + 1.0) / 2.0

    m = len(sol.times)
    lhs = np.empty((m, g.n))
    for k in range(m):
        u = require_positive(g, sol.values[k], pos_floor)
        ut = time_derivative(sol, k)
        q = sol.potential.at(sol.times[k])
        lhs[k] = (gamma(g, np.sqrt(u)) / u
                  - root_dd * ut / (2.0 * u)
                  - root_dd * q / 2.0)
    rhs = np.full_like(lhs, rhs_const)

    def witness(i):
        k, x = divmod(i, g.n)
        return {"vertex": int(x), "t": float(sol.times[k])}

    return build_report("sqrt_analog", lhs, rhs, rtol, witnesses=witness)


def integral_of_laplacian(g: WeightedGraph, f) -> float:
    """sum_x (L f)(x) mu(x); zero (up to rounding) for symmetric weights."""
    if not g.is_weight_symmetric:
        raise AsymmetricWeights("the integral identity needs w_xy = w_yx")
    f = as_vertex_function(g, f)
    return float(np.dot(laplacian(g, f), g.mu))


def check_integral_identity(g: WeightedGraph, f, *,
                            rtol: float = 1e-12) -> CheckReport:
    """Check |sum_x (L f)(x) mu(x)| <= rtol * (sum of |arc summands|).

    The integral telescopes over arcs, so the natural rounding scale is
    the total absolute mass sum_{x, y~x} w_xy |f(y) - f(x)| that cancels.
    """
    value = integral_of_laplacian(g, f)
    f = as_vertex_function(g, f)
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    scale = float(np.abs(g.weights * (f[g.indices] - f[src])).sum()) if g.num_arcs else 0.0
    report = build_report("laplacian_integral", [abs(value)], [0.0],
                          rtol=0.0, atol=rtol * max(1.0, scale),
                          witnesses=lambda i: "integral")
    report.extra["integral"] = value
    report.extra["scale"] = scale
    return report
