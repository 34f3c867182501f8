"""Trace functionals Tr(P f(A)) on PSD Hermitian matrices and their
one-sided directional derivatives, with independent verification routes.

The spectral formula, a finite-difference oracle, a perturbation tracker,
and integral-representation quadrature all compute the same quantities by
different means; the package exists to let them argue with each other.
"""

from .derivative_engine import (
    EXACT_DERIVATIVE,
    LOWER_BOUND,
    DerivativeReport,
    DividedDifferenceMatrix,
    GapReport,
    directional_derivative,
    divided_difference_matrix,
    inverse_gap_demo,
    matrix_function,
    phi_map,
)
from .errors import (
    BranchAmbiguityError,
    DomainError,
    ImageConditionError,
    JacobiConvergenceError,
    QuadratureConvergenceError,
)
from .finite_diff import one_sided_derivative, quotient_exponents, richardson
from .hermitian_core import (
    AdmissibilityReport,
    HermitianMatrix,
    PsdCheckResult,
    SpectralDecomposition,
    default_zero_threshold,
    direction_admissible,
    eig,
    image_contained,
    psd_check,
)
from .instances import (
    psd_from_spectrum,
    random_admissible_direction,
    random_density,
    random_hermitian,
    random_image_state,
    random_psd,
    random_unitary,
    separated_spectrum,
)
from .integral_verify import (
    QuadratureResult,
    derivative_via_integral,
    divided_difference_via_integral,
    log_via_integral,
    power_via_integral,
)
from .perturbation_verify import (
    DEFAULT_T_GRID,
    BranchTrack,
    KernelBranchCheck,
    KernelLimitReport,
    Prop1Report,
    check_kernel_limit,
    check_prop1,
    refine_grid,
    track_branches,
)
from .rng import SplitMix64
from .scalar_functions import (
    DividedDifference,
    Regime,
    ScalarFunction,
    builtin,
    custom,
    divided_difference,
    is_reciprocal,
)
from .trace_functional import (
    ExtendedReal,
    FunctionalResult,
    eval_functional,
    functional_from_decomposition,
    relative_entropy,
)

__all__ = [
    "AdmissibilityReport",
    "BranchAmbiguityError",
    "BranchTrack",
    "DEFAULT_T_GRID",
    "DerivativeReport",
    "DividedDifference",
    "DividedDifferenceMatrix",
    "DomainError",
    "EXACT_DERIVATIVE",
    "ExtendedReal",
    "FunctionalResult",
    "GapReport",
    "HermitianMatrix",
    "ImageConditionError",
    "JacobiConvergenceError",
    "KernelBranchCheck",
    "KernelLimitReport",
    "LOWER_BOUND",
    "Prop1Report",
    "PsdCheckResult",
    "QuadratureConvergenceError",
    "QuadratureResult",
    "Regime",
    "ScalarFunction",
    "SpectralDecomposition",
    "SplitMix64",
    "builtin",
    "check_kernel_limit",
    "check_prop1",
    "custom",
    "default_zero_threshold",
    "derivative_via_integral",
    "direction_admissible",
    "directional_derivative",
    "divided_difference",
    "divided_difference_matrix",
    "divided_difference_via_integral",
    "eig",
    "eval_functional",
    "functional_from_decomposition",
    "image_contained",
    "inverse_gap_demo",
    "is_reciprocal",
    "log_via_integral",
    "matrix_function",
    "one_sided_derivative",
    "phi_map",
    "power_via_integral",
    "psd_check",
    "psd_from_spectrum",
    "quotient_exponents",
    "random_admissible_direction",
    "random_density",
    "random_hermitian",
    "random_image_state",
    "random_psd",
    "random_unitary",
    "refine_grid",
    "relative_entropy",
    "richardson",
    "separated_spectrum",
    "track_branches",
]
