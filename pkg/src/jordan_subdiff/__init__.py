"""jordan-subdiff: spectral calculus and subdifferentials in Euclidean Jordan algebras."""

from .algebra import (
    AlgebraDescriptor,
    Element,
    Factor,
    FactorKind,
    jordan_product,
    lyapunov_matrix,
    quadratic_apply,
    random_element,
    trace,
    trace_inner,
)
from .calculus import (
    EigenBlockStructure,
    block_structure,
    eigen_dir_derivative,
    majorizes,
    stabilizer_hull_member,
)
from .errors import EigensolverError, JordanError
from .frames import (
    JordanFrame,
    SpectralDecomposition,
    block_idempotent,
    common_frame,
    diag_build,
    diag_in_frame,
    element_with_spectrum,
    eigen_idempotent_member,
    frame_extend,
    frame_violations,
    operator_commute,
    peirce_project,
    random_frame,
    spectral_decompose,
)
from .functions import SubdiffKind, SubdiffSet, SymmetricFunctionId, dist0, subdiff, value
from .kl import KLReport, kl_check, kl_check_vector, kl_exponent_fit, kl_transfer_check
from .transfer import (
    SpectralQueryReport,
    lambda_k_subdiff_member,
    lambda_k_subdiff_query,
    spectral_dist0,
    spectral_subdiff_member,
    spectral_subgradient_build,
    spectral_value,
)

__all__ = [
    "AlgebraDescriptor",
    "EigenBlockStructure",
    "EigensolverError",
    "Element",
    "Factor",
    "FactorKind",
    "JordanError",
    "JordanFrame",
    "KLReport",
    "SpectralDecomposition",
    "SpectralQueryReport",
    "SubdiffKind",
    "SubdiffSet",
    "SymmetricFunctionId",
    "block_idempotent",
    "block_structure",
    "common_frame",
    "diag_build",
    "diag_in_frame",
    "dist0",
    "eigen_dir_derivative",
    "eigen_idempotent_member",
    "element_with_spectrum",
    "frame_extend",
    "frame_violations",
    "jordan_product",
    "kl_check",
    "kl_check_vector",
    "kl_exponent_fit",
    "kl_transfer_check",
    "lambda_k_subdiff_member",
    "lambda_k_subdiff_query",
    "lyapunov_matrix",
    "majorizes",
    "operator_commute",
    "peirce_project",
    "quadratic_apply",
    "random_element",
    "random_frame",
    "spectral_decompose",
    "spectral_dist0",
    "spectral_subdiff_member",
    "spectral_subgradient_build",
    "spectral_value",
    "stabilizer_hull_member",
    "subdiff",
    "trace",
    "trace_inner",
    "value",
]
