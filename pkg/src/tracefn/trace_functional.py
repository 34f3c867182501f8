"""Trace functionals Tr(P f(A)) on PSD matrices, extended to singular A.

For singular A the functional is the image-restricted sum over the nonzero
eigenvalues. When f extends continuously to 0 the kernel contributes
f(0+) * Tr(P restricted to ker A); when it does not, the value is finite only
if im(P) is contained in im(A), and +infinity otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hermitian_core import HermitianMatrix, SpectralDecomposition, eig, image_contained
from .scalar_functions import ScalarFunction, builtin

_FINITE = "finite"
_PLUS_INFINITY = "plus_infinity"


@dataclass(frozen=True)
class ExtendedReal:
    """A real number or +infinity (the only infinity these functionals produce)."""

    tag: str
    value: float | None = None

    def __post_init__(self):
        if self.tag not in (_FINITE, _PLUS_INFINITY):
            raise DomainError(f"unknown tag {self.tag!r}")
        if (self.tag == _FINITE) != (self.value is not None):
            raise DomainError("value must be present exactly when finite")

    @classmethod
    def finite(cls, value: float) -> "ExtendedReal":
        return cls(_FINITE, float(value))

    @classmethod
    def infinity(cls) -> "ExtendedReal":
        return cls(_PLUS_INFINITY)

    @property
    def is_finite(self) -> bool:
        return self.tag == _FINITE

    def as_float(self) -> float:
        return self.value if self.is_finite else math.inf

    def serializable(self) -> float | str:
        """JSON-safe form; +infinity becomes the token '+inf'."""
        return self.value if self.is_finite else "+inf"

    def __repr__(self) -> str:
        return repr(self.value) if self.is_finite else "+inf"


@dataclass(frozen=True)
class FunctionalResult:
    value: ExtendedReal
    rank_used: int
    image_condition_held: bool


def functional_from_decomposition(
    f: ScalarFunction, p: HermitianMatrix, a: SpectralDecomposition
) -> FunctionalResult:
    """Evaluate Tr(P f(A)) from an existing decomposition of A.

    Assumes the PSD preconditions were already checked; exists so callers that
    evaluate many functionals of one matrix decompose it once.
    """
    if p.dim != a.dim:
        raise DomainError(f"dimension mismatch: P is {p.dim}, A is {a.dim}")
    v = a.eigenvectors
    weights = np.real(np.sum(v.conj() * (p.mat @ v), axis=0))
    r = a.rank
    top = float(np.dot([f.eval(x) for x in a.eigenvalues[:r]], weights[:r])) if r else 0.0
    if r == a.dim:
        return FunctionalResult(ExtendedReal.finite(top), r, True)

    held = image_contained(p, a)
    if f.extends_to_zero is not None:
        if not f.tf_limit_zero and not held:
            # A finite limit at 0+ forces t*f(t) -> 0, so this combination can
            # only come from an inconsistently flagged custom function.
            raise DomainError(
                f"{f.name}: extends_to_zero set with tf_limit_zero=False; "
                "flags are inconsistent and the kernel contribution is undefined"
            )
        kernel_weight = float(np.sum(weights[r:]))
        return FunctionalResult(
            ExtendedReal.finite(top + f.extends_to_zero * kernel_weight), r, held
        )
    if held:
        return FunctionalResult(ExtendedReal.finite(top), r, True)
    return FunctionalResult(ExtendedReal.infinity(), r, False)


def eval_functional(
    f: ScalarFunction,
    p: HermitianMatrix,
    a: HermitianMatrix,
    *,
    zero_threshold: float | None = None,
) -> FunctionalResult:
    """Tr(P f(A)) for PSD P and PSD A, as an extended real.

    Raises DomainError if either matrix fails the PSD check at the default
    (or supplied) zero threshold.
    """
    dec_p = eig(p, zero_threshold=zero_threshold)
    if dec_p.eigenvalues[-1] < -dec_p.zero_threshold:
        raise DomainError(
            f"P is not PSD: min eigenvalue {dec_p.eigenvalues[-1]:.6e} "
            f"below -{dec_p.zero_threshold:.3e}"
        )
    dec_a = eig(a, zero_threshold=zero_threshold)
    if dec_a.eigenvalues[-1] < -dec_a.zero_threshold:
        raise DomainError(
            f"A is not PSD: min eigenvalue {dec_a.eigenvalues[-1]:.6e} "
            f"below -{dec_a.zero_threshold:.3e}"
        )
    return functional_from_decomposition(f, p, dec_a)


def relative_entropy(p: HermitianMatrix, q: HermitianMatrix) -> ExtendedReal:
    """Tr(P log P) - Tr(P log Q), or +infinity when im(P) is not inside im(Q).

    Both traces are restricted to the image of the first argument, which in
    particular reads the 0*log(0) kernel terms of Tr(P log P) as 0.
    """
    log = builtin("log")
    term_q = eval_functional(log, p, q)
    if not term_q.value.is_finite:
        return ExtendedReal.infinity()
    term_p = eval_functional(log, p, p)
    return ExtendedReal.finite(term_p.value.value - term_q.value.value)
