"""Complementarity-based solver for open and multi-technology input-output economies."""

from .errors import (
    CapExceeded,
    DimensionMismatch,
    EnumerationCapExceeded,
    LeontiefIpmError,
    LineSearchFailure,
    ModelFormatError,
    RecoveryVerificationFailed,
    SingularMatrix,
    SingularNewtonSystem,
    ZeroMerit,
)
from .ipm import (
    Direction,
    IterateState,
    SolveReport,
    SolveStatus,
    SolverConfig,
    TraceRecord,
    evaluate_iterate,
    grad_merit_dot_direction,
    merit,
    neighborhood_contains,
    newton_direction,
    solve_lcp,
    solve_vlcp,
    step_length,
)
from .linalg import (
    euclidean_norm,
    hadamard,
    lu_solve,
    mat_mat,
    mat_vec,
    transpose,
)
from .model import (
    GeneralizedLeontiefModel,
    LcpInstance,
    VerificationResult,
    VerticalBlockMatrix,
    VlcpInstance,
    VlcpSolution,
    build_generalized_leontief_vlcp,
    build_open_leontief_lcp,
    equivalent_square_matrix,
    is_vertical_block_P,
    lift_vlcp_to_lcp,
    load_model,
    m_matrix_check,
    model_from_dict,
    recover_vlcp_solution,
    representative_submatrices,
    verify_vlcp_solution,
)
from .oracle import OracleSolution, enumerate_lcp_solutions, enumerate_vlcp_solutions

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "DimensionMismatch",
    "Direction",
    "EnumerationCapExceeded",
    "GeneralizedLeontiefModel",
    "IterateState",
    "LcpInstance",
    "LeontiefIpmError",
    "LineSearchFailure",
    "ModelFormatError",
    "OracleSolution",
    "RecoveryVerificationFailed",
    "SingularMatrix",
    "SingularNewtonSystem",
    "SolveReport",
    "SolveStatus",
    "SolverConfig",
    "TraceRecord",
    "VerificationResult",
    "VerticalBlockMatrix",
    "VlcpInstance",
    "VlcpSolution",
    "ZeroMerit",
    "build_generalized_leontief_vlcp",
    "build_open_leontief_lcp",
    "enumerate_lcp_solutions",
    "enumerate_vlcp_solutions",
    "equivalent_square_matrix",
    "euclidean_norm",
    "evaluate_iterate",
    "grad_merit_dot_direction",
    "hadamard",
    "is_vertical_block_P",
    "lift_vlcp_to_lcp",
    "load_model",
    "lu_solve",
    "m_matrix_check",
    "mat_mat",
    "mat_vec",
    "merit",
    "model_from_dict",
    "neighborhood_contains",
    "newton_direction",
    "recover_vlcp_solution",
    "representative_submatrices",
    "solve_lcp",
    "solve_vlcp",
    "step_length",
    "transpose",
    "verify_vlcp_solution",
]
