"""svkit: spectral-volume solvers for 1-D variable-coefficient advection.

Two spectral-volume variants (Gauss-partition LSV and sign-adaptive Radau
RSV) of arbitrary order, an upwind discontinuous Galerkin reference scheme,
RK4 time stepping, superconvergence error functionals, and a study harness
that reproduces convergence tables on the periodic domain [0, 2*pi].
"""

from .cases import CaseSpec, manufactured_case
from .dg import DGOperator, dg_rhs
from .exceptions import (
    BelowRoundoffError,
    DegenerateNodesError,
    InvalidConfigError,
    NonConvergenceError,
    NonFiniteError,
    OutOfDomainError,
    SingularMatrixError,
    SvkitError,
    UnknownCaseError,
)
from .mesh import (
    DOMAIN_LENGTH,
    FluxCoefficient,
    Mesh1D,
    Partition,
    Scheme,
    build_mesh,
    build_partition,
    classify_elements,
)
from .metrics import (
    ErrorReport,
    compare_sv_dg,
    convergence_orders,
    error_report,
    flux_superconv_errors,
    node_polynomial_extrema,
    solution_superconv_errors,
)
from .poly import (
    InterpKind,
    PiecewisePoly,
    broken_norm,
    cell_averages,
    interpolate,
    interpolation_nodes,
    t_transform,
    total_mass,
    triple_norm,
)
from .quadrature import (
    QuadratureRule,
    RuleKind,
    integrate_panel,
    legendre_eval,
    make_rule,
)
from .study import StudyConfig, StudyResult, emit_table, run_single, run_study
from .sv import SchemeConfig, SVOperator, cv_matrix, sv_rhs, upwind_interface_flux
from .timestep import integrate_to, rk4_step

__version__ = "0.1.0"

__all__ = [
    "BelowRoundoffError",
    "CaseSpec",
    "DGOperator",
    "DOMAIN_LENGTH",
    "DegenerateNodesError",
    "ErrorReport",
    "FluxCoefficient",
    "InterpKind",
    "InvalidConfigError",
    "Mesh1D",
    "NonConvergenceError",
    "NonFiniteError",
    "OutOfDomainError",
    "Partition",
    "PiecewisePoly",
    "QuadratureRule",
    "RuleKind",
    "Scheme",
    "SchemeConfig",
    "SingularMatrixError",
    "StudyConfig",
    "StudyResult",
    "SVOperator",
    "SvkitError",
    "UnknownCaseError",
    "broken_norm",
    "build_mesh",
    "build_partition",
    "cell_averages",
    "classify_elements",
    "compare_sv_dg",
    "convergence_orders",
    "cv_matrix",
    "dg_rhs",
    "emit_table",
    "error_report",
    "flux_superconv_errors",
    "integrate_panel",
    "integrate_to",
    "interpolate",
    "interpolation_nodes",
    "legendre_eval",
    "make_rule",
    "manufactured_case",
    "node_polynomial_extrema",
    "rk4_step",
    "run_single",
    "run_study",
    "solution_superconv_errors",
    "sv_rhs",
    "t_transform",
    "total_mass",
    "triple_norm",
    "upwind_interface_flux",
]
