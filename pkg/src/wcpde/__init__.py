"""Exact worst-case error comparison of linear PDE solvers.

Any linear solver for the Poisson Dirichlet problem reduces to a row of
weights on the data values it reads; in a Sobolev reproducing-kernel
space the worst-case error of that row over the unit ball of solutions
is a computable quadratic form.  This package extracts those rows from
finite elements, symmetric and unsymmetric kernel collocation, and
kernel finite differences, evaluates their error constants exactly,
computes the error-optimal competitor, and packages the comparison as a
benchmark over a nested family of disk triangulations, with CLI and
HTTP front ends.
"""

__version__ = "0.1.0"

from .benchmark import (
    BenchmarkConfig,
    BenchmarkResult,
    convergence_orders,
    error_map,
    load_config,
    run_benchmark,
    write_outputs,
)
from .kernel import (
    Functional,
    KernelSpec,
    apply_pair,
    clear_gram_cache,
    cross_vector,
    gram_matrix,
    minus_laplacian_at,
    pair_matrix,
    point_evaluation,
)
from .linalg import FactorizationReport, pinv_apply, pinv_matrix, solve_spd
from .mesh import (
    DiskMesh,
    base_disk,
    disk_case,
    export_triangles,
    export_vertices,
    fill_distance,
    point_sets,
    refine,
)
from .recovery import (
    ErrorReport,
    RecoveryRow,
    error_norm,
    lagrange_check,
    optimal_norm_direct,
    optimal_recovery,
)
from .solvers import (
    METHOD_NAMES,
    data_functionals,
    fem_recovery,
    gfd_local_recovery,
    kansa_recovery,
    method_operator,
    symmetric_collocation_recovery,
)
from .special import OrderTooLowError, bessel_k, matern_g, matern_laplacian_profile

__all__ = [
    "__version__",
    "BenchmarkConfig",
    "BenchmarkResult",
    "DiskMesh",
    "ErrorReport",
    "FactorizationReport",
    "Functional",
    "KernelSpec",
    "METHOD_NAMES",
    "OrderTooLowError",
    "RecoveryRow",
    "apply_pair",
    "base_disk",
    "bessel_k",
    "clear_gram_cache",
    "convergence_orders",
    "cross_vector",
    "data_functionals",
    "disk_case",
    "error_map",
    "error_norm",
    "export_triangles",
    "export_vertices",
    "fem_recovery",
    "fill_distance",
    "gfd_local_recovery",
    "gram_matrix",
    "kansa_recovery",
    "lagrange_check",
    "load_config",
    "matern_g",
    "matern_laplacian_profile",
    "mesh",
    "method_operator",
    "minus_laplacian_at",
    "optimal_norm_direct",
    "optimal_recovery",
    "pair_matrix",
    "pinv_apply",
    "pinv_matrix",
    "point_evaluation",
    "point_sets",
    "refine",
    "run_benchmark",
    "solve_spd",
    "symmetric_collocation_recovery",
    "write_outputs",
]
