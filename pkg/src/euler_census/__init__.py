"""Counting Eulerian circuits of even graphs: asymptotic formula and exact checks."""

from .asymptotics import (
    AsymptoticEstimate,
    CorrectionConstants,
    correction_constants,
    format_log_count,
    imbalance_residual,
    k_ec,
    ln_ec_complete,
    ln_ec_estimate,
)
from .enumeration import (
    BudgetExceeded,
    ExactCount,
    brute_force_directed_trees,
    brute_force_spanning_trees,
    count_eulerian_circuits,
    find_eulerian_circuit,
)
from .graph import (
    GenerationError,
    Graph,
    GraphFormatError,
    PreconditionError,
    ValidationReport,
    complete_graph,
    cycle_graph,
    format_graph,
    parse_graph,
    random_even_graph,
    validate,
)
from .integrals import (
    IntegralModel,
    IntegralResult,
    build_model,
    integrand_log_int,
    mc_estimate_int,
    quadrature_S,
    r_quadratic,
)
from .linalg import (
    LaplacianBundle,
    SpectralSummary,
    algebraic_connectivity,
    condition_number_1,
    det_qhat_exact,
    eigenvalues_symmetric,
    is_gamma_mixing,
    laplacian,
    logdet_expansion,
    norms,
    spanning_tree_count_exact,
    spectral_summary,
    tutte_minor,
)

__version__ = "0.1.0"
