"""Spectrum of -L and the eigenvalue bounds that follow from the gradient estimate.

Two bounds are checked here. The bottom of the spectrum satisfies

    lambda* <= D_mu + sqrt(D_mu / d)

(on a finite graph lambda* = 0, so the check is degenerate; a Dirichlet
restriction to a proper vertex subset is exposed as a strictly positive
proxy, which still sits below the same constant because its bottom
eigenvalue is maximised by singletons at max deg/mu = D_mu). And every
nonzero eigenvalue of a finite connected graph with symmetric weights
satisfies

    lambda >= 1 / ( D d ( exp{1 + D d (D_mu + sqrt(D_mu/d))} - 1 ) )

with D the hop diameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricWeights, BadParameters, Disconnected
from .graphs import WeightedGraph
from .heat import _symmetrized_eigensystem
from .operators import laplacian
from .reports import CheckReport, build_report

__all__ = [
    "SpectralDecomposition",
    "eigendecompose",
    "cheng_bound_check",
    "dirichlet_bottom",
    "eigenvalue_lower_bound",
    "check_lower_bound",
]


@dataclass
class SpectralDecomposition:
    """Eigenpairs of -L, ascending, mu-orthonormal eigenfunctions as columns."""

    graph: WeightedGraph
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray

    def residual(self) -> float:
        """max_k max_x |-L phi_k - lambda_k phi_k| / (1 + lambda_k)."""
        worst = 0.0
        for k, lam in enumerate(self.eigenvalues):
            phi = self.eigenfunctions[:, k]
            defect = np.abs(-laplacian(self.graph, phi) - lam * phi).max()
            worst = max(worst, float(defect) / (1.0 + float(lam)))
        return worst

    def orthonormality_defect(self) -> float:
        gram = self.eigenfunctions.T @ (self.graph.mu[:, None] * self.eigenfunctions)
        return float(np.abs(gram - np.eye(len(self.eigenvalues))).max())

    def zero_multiplicity(self, atol: float = 1e-9) -> int:
        return int(np.sum(np.abs(self.eigenvalues) <= atol))


def eigendecompose(g: WeightedGraph) -> SpectralDecomposition:
    """Full spectrum of -L via the measure-symmetrised matrix."""
    if not g.is_weight_symmetric:
        raise AsymmetricWeights("eigendecomposition needs w_xy = w_yx")
    lam, V = _symmetrized_eigensystem(g)
    phi = V / np.sqrt(g.mu)[:, None]
    # reproducible sign: first non-negligible entry of each column positive
    for k in range(phi.shape[1]):
        col = phi[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12 * max(1.0, np.abs(col).max()))
        if len(nz) and col[nz[0]] < 0:
            phi[:, k] = -col
    return SpectralDecomposition(g, lam.copy(), phi)


def cheng_bound_check(g: WeightedGraph, subset=None, *,
                      rtol: float = 1e-9) -> CheckReport:
    """Check bottom-of-spectrum <= D_mu + sqrt(D_mu / d).

    With ``subset`` given, the Dirichlet bottom eigenvalue on that proper
    vertex subset replaces the (identically zero) full-graph bottom; this
    variant goes beyond the plain statement but obeys the same constant.
    """
    c = g.constants
    bound = c.D_mu + (np.sqrt(c.D_mu / c.d) if c.d > 0 else 0.0)
    if subset is None:
        dec = eigendecompose(g)
        bottom = float(dec.eigenvalues[0])
        witness = "lambda_0"
    else:
        bottom = dirichlet_bottom(g, subset)
        witness = f"dirichlet_bottom({sorted(g.vertex_id(v) for v in subset)})"
    report = build_report("cheng_bound", [bottom], [bound], rtol,
                          witnesses=lambda i: witness)
    return report


def dirichlet_bottom(g: WeightedGraph, subset) -> float:
    """Bottom eigenvalue of -L restricted to ``subset`` with zero data outside."""
    if not g.is_weight_symmetric:
        raise AsymmetricWeights("Dirichlet eigenvalues need w_xy = w_yx")
    ix = sorted({g.vertex_id(v) for v in subset})
    if not ix or len(ix) >= g.n:
        raise BadParameters("subset must be a nonempty proper vertex subset")
    from .heat import _symmetrized_matrix

    S = _symmetrized_matrix(g)[np.ix_(ix, ix)]
    return float(np.linalg.eigvalsh(S)[0])


def eigenvalue_lower_bound(g: WeightedGraph) -> float:
    """The diameter-based floor under every nonzero eigenvalue."""
    if not g.is_weight_symmetric:
        raise AsymmetricWeights("the lower bound needs w_xy = w_yx")
    if not g.is_connected:
        raise Disconnected("the lower bound holds on connected graphs")
    if g.n < 2:
        raise BadParameters("a single-vertex graph has no nonzero eigenvalue")
    c = g.constants
    D = g.diameter()
    return lower_bound_formula(D, c.d, c.D_mu)


def lower_bound_formula(D: float, d: float, D_mu: float) -> float:
    """1 / ( D d ( exp{1 + D d (D_mu + sqrt(D_mu/d))} - 1 ) )."""
    Dd = D * d
    return 1.0 / (Dd * (np.exp(1.0 + Dd * (D_mu + np.sqrt(D_mu / d))) - 1.0))


def check_lower_bound(g: WeightedGraph, *, rtol: float = 1e-9) -> CheckReport:
    """Check lambda_1 (smallest nonzero eigenvalue) >= the diameter floor."""
    bound = eigenvalue_lower_bound(g)
    dec = eigendecompose(g)
    lam1 = float(dec.eigenvalues[1])
    report = build_report("lower_bound", [bound], [lam1], rtol,
                          witnesses=lambda i: "lambda_1")
    report.extra["bound"] = bound
    report.extra["lambda_1"] = lam1
    return report
