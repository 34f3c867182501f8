"""Directional derivatives of trace functionals via the divided-difference map.

The central object is the map B -> V (D o (V* B V)) V*, where V diagonalizes
A and D holds first divided differences of f over pairs of nonzero
eigenvalues (zero elsewhere). Tracing against P gives the derivative of
Tr(P f(A)) along B whenever t*f(t) -> 0 at 0+ and im(P) lies in im(A); for a
positive definite A this is the Frechet derivative of f, with no conditions
beyond differentiability. For f = inverse at singular A the same trace is
only a lower bound on the true one-sided derivative, and inverse_gap_demo
exhibits a 2x2 pair where the gap is exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ImageConditionError
from .finite_diff import one_sided_derivative
from .hermitian_core import (
    AdmissibilityReport,
    HermitianMatrix,
    SpectralDecomposition,
    direction_admissible,
    eig,
    image_contained,
)
from .scalar_functions import ScalarFunction, builtin, divided_difference
from .trace_functional import functional_from_decomposition

_TRACE_IMAG_TOL = 1e-10

EXACT_DERIVATIVE = "exact_derivative"
LOWER_BOUND = "lower_bound"


@dataclass(frozen=True, eq=False)
class DividedDifferenceMatrix:
    """f[1](alpha_i, alpha_j) over pairs of nonzero eigenvalues, 0 on kernel pairs."""

    entries: np.ndarray
    basis: np.ndarray
    rank: int


@dataclass(frozen=True, eq=False)
class DerivativeReport:
    """Formula value Tr(P Phi_f(B)) plus the strength of its interpretation.

    semantics is "exact_derivative" when A is positive definite or
    t*f(t) -> 0 at 0+, and "lower_bound" otherwise (the built-in functions
    without the limit property are positive near 0, which is what makes the
    bound direction valid). An inadmissible direction keeps the value but the
    embedded admissibility report flags it.
    """

    formula_value: float
    semantics: str
    admissibility: AdmissibilityReport
    image_condition_held: bool


@dataclass(frozen=True)
class GapReport:
    formula_value: float
    fd_estimate: float
    curve_t: tuple
    curve_values: tuple
    curve_closed_form: tuple
    gap: float


def divided_difference_matrix(
    f: ScalarFunction, a: SpectralDecomposition
) -> DividedDifferenceMatrix:
    n = a.dim
    r = a.rank
    entries = np.zeros((n, n))
    vals = a.eigenvalues
    for i in range(r):
        for j in range(i, r):
            d = divided_difference(f, float(vals[i]), float(vals[j])).value
            entries[i, j] = d
            entries[j, i] = d
    entries.flags.writeable = False
    return DividedDifferenceMatrix(entries, a.eigenvectors, r)


def phi_map(f: ScalarFunction, a: SpectralDecomposition, b: HermitianMatrix) -> HermitianMatrix:
    """Apply the divided-difference map of f at A to the direction B."""
    if b.dim != a.dim:
        raise DomainError(f"dimension mismatch: A is {a.dim}, B is {b.dim}")
    v = a.eigenvectors
    d = divided_difference_matrix(f, a).entries
    x = v @ (d * (v.conj().T @ b.mat @ v)) @ v.conj().T
    residual = float(np.max(np.abs(x - x.conj().T)))
    if residual > 1e-10 * (1.0 + float(np.max(np.abs(x)))):
        raise RuntimeError(f"divided-difference map lost Hermiticity: residual {residual:.3e}")
    return HermitianMatrix((x + x.conj().T) / 2.0)


def matrix_function(
    f: ScalarFunction, a: HermitianMatrix, *, zero_threshold: float | None = None
) -> HermitianMatrix:
    """f applied spectrally to a PSD matrix, restricted to its image.

    Kernel eigenvalues contribute f(0+) when f extends to zero and nothing
    otherwise (the image-restricted reading used throughout).
    """
    dec = eig(a, zero_threshold=zero_threshold)
    if dec.eigenvalues[-1] < -dec.zero_threshold:
        raise DomainError(f"matrix is not PSD: min eigenvalue {dec.eigenvalues[-1]:.6e}")
    fvals = np.zeros(dec.dim)
    for i in range(dec.rank):
        fvals[i] = f.eval(float(dec.eigenvalues[i]))
    if f.extends_to_zero is not None:
        fvals[dec.rank :] = f.extends_to_zero
    v = dec.eigenvectors
    return HermitianMatrix((v * fvals) @ v.conj().T)


def directional_derivative(
    f: ScalarFunction,
    p: HermitianMatrix,
    a: HermitianMatrix,
    b: HermitianMatrix,
    *,
    zero_threshold: float | None = None,
) -> DerivativeReport:
    """Tr(P Phi_f(B)) with its semantics and an admissibility diagnostic.

    Requires PSD P and A and the image condition im(P) in im(A). The
    direction B only needs to be Hermitian; if the probe check suggests
    A + tB leaves the PSD cone it is flagged in the report, not rejected.
    """
    dec_p = eig(p, zero_threshold=zero_threshold)
    if dec_p.eigenvalues[-1] < -dec_p.zero_threshold:
        raise DomainError(f"P is not PSD: min eigenvalue {dec_p.eigenvalues[-1]:.6e}")
    dec_a = eig(a, zero_threshold=zero_threshold)
    if dec_a.eigenvalues[-1] < -dec_a.zero_threshold:
        raise DomainError(f"A is not PSD: min eigenvalue {dec_a.eigenvalues[-1]:.6e}")
    if not image_contained(p, dec_a):
        raise ImageConditionError(
            "image condition violated: im(P) is not contained in im(A), "
            "so the derivative formula does not apply"
        )

    phi = phi_map(f, dec_a, b)
    tr = complex(np.trace(p.mat @ phi.mat))
    if abs(tr.imag) > _TRACE_IMAG_TOL * (1.0 + abs(tr.real)):
        raise RuntimeError(
            f"trace of P Phi(B) has imaginary residue {tr.imag:.3e}; "
            "inputs are too far from Hermitian for the formula to be trusted"
        )
    singular = dec_a.rank < dec_a.dim
    semantics = EXACT_DERIVATIVE if (not singular or f.tf_limit_zero) else LOWER_BOUND
    report = direction_admissible(dec_a, b)
    return DerivativeReport(float(tr.real), semantics, report, True)


def inverse_gap_demo() -> GapReport:
    """The 2x2 pair where the formula undershoots the true derivative by 1.

    A = P = diag(1, 0) and B = [[0, 1], [1, 1]]: the formula picks out the
    upper-left entry of B and gives 0, while Tr(P (A + tB)^{-1}) = 1/(1-t)
    has one-sided derivative 1 at t = 0.
    """
    a = HermitianMatrix.diagonal([1.0, 0.0])
    p = HermitianMatrix.diagonal([1.0, 0.0])
    b = HermitianMatrix(np.array([[0.0, 1.0], [1.0, 1.0]]))
    inverse = builtin("inverse")

    report = directional_derivative(inverse, p, a, b)

    def curve(t: float) -> float:
        dec = eig(a + t * b)
        return functional_from_decomposition(inverse, p, dec).value.as_float()

    fd_estimate, _ = one_sided_derivative(curve, base_step=1e-4)
    ts = (0.1, 0.01, 0.001)
    numeric = tuple(curve(t) for t in ts)
    closed = tuple(1.0 / (1.0 - t) for t in ts)
    return GapReport(
        report.formula_value,
        fd_estimate,
        ts,
        numeric,
        closed,
        fd_estimate - report.formula_value,
    )
