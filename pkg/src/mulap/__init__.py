"""Weighted-graph Laplacian calculus, machine-checked.

Core objects: :class:`~mulap.graphs.WeightedGraph` with its structural
constants, the mu-Laplacian and gradient form, heat semigroup and
kernel, the spectrum, and the Harnack path bound. Every estimate has a
check_* function returning a :class:`~mulap.reports.CheckReport`, and
:mod:`mulap.campaign` runs randomized verification campaigns over them.
"""

__version__ = "0.1.0"

from . import errors
from .graphs import (
    GraphConstants,
    ShortestPathDag,
    WeightedGraph,
    ball_volume,
    constants,
    dist,
    shortest_path_dag,
    validate,
)
from .kernels import backend_name
from .operators import (
    check_alt_estimate,
    check_bhlly_analog,
    check_case,
    check_gradient_estimate,
    check_integral_identity,
    check_sqrt_comparison,
    gamma,
    integral_of_laplacian,
    laplacian,
)
from .heat import (
    HeatKernel,
    HeatSolution,
    Potential,
    as_potential,
    check_kernel_identities,
    heat_kernel,
    pde_residual,
    solve_heat,
    time_derivative,
)
from .spectral import (
    SpectralDecomposition,
    check_lower_bound,
    cheng_bound_check,
    dirichlet_bottom,
    eigendecompose,
    eigenvalue_lower_bound,
)
from .harnack import (
    HarnackBound,
    bounded_q_bound,
    check_harnack,
    check_kernel_comparison,
    harnack_bound,
    kernel_upper_bound,
    min_path_functional,
    segment_cost,
)
from .reports import CheckReport
from .campaign import CampaignConfig, run_campaign

__all__ = [
    "__version__",
    "errors",
    "backend_name",
    "WeightedGraph",
    "GraphConstants",
    "ShortestPathDag",
    "validate",
    "constants",
    "dist",
    "ball_volume",
    "shortest_path_dag",
    "laplacian",
    "gamma",
    "integral_of_laplacian",
    "check_gradient_estimate",
    "check_case",
    "check_alt_estimate",
    "check_sqrt_comparison",
    "check_bhlly_analog",
    "check_integral_identity",
    "Potential",
    "as_potential",
    "HeatSolution",
    "HeatKernel",
    "solve_heat",
    "time_derivative",
    "heat_kernel",
    "check_kernel_identities",
    "pde_residual",
    "SpectralDecomposition",
    "eigendecompose",
    "cheng_bound_check",
    "dirichlet_bottom",
    "eigenvalue_lower_bound",
    "check_lower_bound",
    "HarnackBound",
    "segment_cost",
    "min_path_functional",
    "harnack_bound",
    "bounded_q_bound",
    "check_harnack",
    "check_kernel_comparison",
    "kernel_upper_bound",
    "CheckReport",
    "CampaignConfig",
    "run_campaign",
]
