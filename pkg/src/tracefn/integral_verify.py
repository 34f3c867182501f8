"""Recompute values and derivatives from half-line integral representations.

Everything here is a second, structurally different route to numbers the
spectral formulas already produce: scalar powers and logs, their divided
differences, and the directional derivative of the trace functional.  The
representations integrate rational functions of s over (0, infinity), so
agreement is evidence against an algebra slip in the eigenbasis route.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import DomainError, ImageConditionError
from .hermitian_core import HermitianMatrix, eig, image_contained
from .quadrature import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_PANELS,
    QuadratureResult,
    integrate_half_line,
)
from .scalar_functions import ScalarFunction

__all__ = [
    "QuadratureResult",
    "power_via_integral",
    "divided_difference_via_integral",
    "log_via_integral",
    "derivative_via_integral",
]


def _power_exponent(p: float) -> float:
    p = float(p)
    if not (-1.0 < p < 1.0) or p == 0.0:
        raise DomainError(
            "power representation needs an exponent in (-1, 0) or (0, 1)"
        )
    return p


def _positive(x: float, what: str) -> float:
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"{what} must be positive")
    return x


def power_via_integral(
    p: float,
    x: float,
    *,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """x**p recovered from its half-line representation.

    p in (-1, 0) uses -sin(p pi)/pi times the integral of s**p / (x + s);
    p in (0, 1) uses sin(p pi)/pi times the integral of s**p times
    (1/s - 1/(x + s)), combined into x * s**(p-1) / (x + s) so the
    integrand has one sign and no cancellation.
    """
    p = _power_exponent(p)
    x = _positive(x, "x")
    if p < 0.0:
        weight = -math.sin(p * math.pi) / math.pi

        def integrand(s: float) -> float:
            return s**p / (x + s)

    else:
        weight = math.sin(p * math.pi) / math.pi

        def integrand(s: float) -> float:
            return x * s ** (p - 1.0) / (x + s)

    part = integrate_half_line(integrand, x, abs_tol=abs_tol, max_panels=max_panels)
    return QuadratureResult(
        weight * part.value,
        abs(weight) * part.abs_error_estimate,
        part.evaluations,
    )


def divided_difference_via_integral(
    p: float,
    x: float,
    y: float,
    *,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """Divided difference of t**p at (x, y) via sin(p pi)/pi integral.

    The integrand s**p / ((x + s)(y + s)) handles x = y with no special
    case: it degenerates to the squared pole and the integral to p*x**(p-1).
    """
    p = _power_exponent(p)
    x = _positive(x, "x")
    y = _positive(y, "y")
    weight = math.sin(p * math.pi) / math.pi

    def integrand(s: float) -> float:
        return s**p / ((x + s) * (y + s))

    part = integrate_half_line(
        integrand, max(x, y), abs_tol=abs_tol, max_panels=max_panels
    )
    return QuadratureResult(
        weight * part.value,
        abs(weight) * part.abs_error_estimate,
        part.evaluations,
    )


def log_via_integral(
    x: float,
    *,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """log x from the difference of two resolvent integrals.

    The raw difference 1/s - 1/(x + s) is not integrable piecewise at
    s = 0, so the anchored combination 1/(1 + s) - 1/(x + s), equal to
    (x - 1) / ((1 + s)(x + s)), is integrated instead; its value is
    log x exactly.
    """
    x = _positive(x, "x")

    def integrand(s: float) -> float:
        return (x - 1.0) / ((1.0 + s) * (x + s))

    part = integrate_half_line(integrand, x, abs_tol=abs_tol, max_panels=max_panels)
    return QuadratureResult(part.value, part.abs_error_estimate, part.evaluations)


def _derivative_weight(f: ScalarFunction) -> tuple[float, Callable[[float], float]]:
    """Prefactor and s-weight for the derivative representation of f."""
    if f.name == "log":
        return 1.0, lambda s: 1.0
    if f.name == "power":
        p = _power_exponent(f.parameter)
        return math.sin(p * math.pi) / math.pi, lambda s: s**p
    raise DomainError(
        "integral route covers f = log and f = power with exponent in "
        f"(-1, 0) or (0, 1), not {f.name!r}"
    )


def derivative_via_integral(
    f: ScalarFunction,
    p: HermitianMatrix,
    a: HermitianMatrix,
    b: HermitianMatrix,
    *,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """Directional derivative of Tr(P f(A)) at A toward B, by quadrature.

    In A's eigenbasis the integrand is the quadratic form
    sum_ij Re(conj(P_ij) B_ij) / ((alpha_i + s)(alpha_j + s)) over the
    nonzero eigenvalues, weighted by s**p or 1.  The basis does not depend
    on s, so the eigenwork happens once and each sample costs O(r^2).
    """
    weight, s_weight = _derivative_weight(f)
    dec = eig(a)
    if dec.eigenvalues[-1] < -dec.zero_threshold:
        raise DomainError("base matrix must be positive semidefinite")
    if not image_contained(p, dec):
        raise ImageConditionError(
            "image condition violated: im(P) is not contained in im(A)"
        )
    r = dec.rank
    if r == 0:
        return QuadratureResult(0.0, 0.0, 0)
    vecs = dec.eigenvectors[:, :r]
    alphas = dec.eigenvalues[:r].copy()
    p_compressed = vecs.conj().T @ p.mat @ vecs
    b_compressed = vecs.conj().T @ b.mat @ vecs
    coeff = np.real(np.conj(p_compressed) * b_compressed)

    def integrand(s: float) -> float:
        poles = 1.0 / (alphas + s)
        return float(poles @ coeff @ poles) * s_weight(s)

    split = float(alphas[0])
    part = integrate_half_line(
        integrand, split, abs_tol=abs_tol, max_panels=max_panels
    )
    return QuadratureResult(
        weight * part.value,
        abs(weight) * part.abs_error_estimate,
        part.evaluations,
    )
