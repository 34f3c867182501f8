"""One-sided difference quotients with Richardson extrapolation.

The extrapolation eliminates a caller-supplied list of error exponents, which
is what makes one-sided quotients usable here: difference quotients of trace
functionals at a singular base point carry fractional error powers t^(1+p)
(for f = x^p) or t*log(t) terms (for f = log) alongside the integer ones, and
those are known in advance from f alone.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .scalar_functions import ScalarFunction


def richardson(
    values: Sequence, *, ratio: float = 0.5, exponents: Sequence[float] = (1.0, 2.0, 3.0)
):
    """Extrapolate samples g(h_k) -> g(0) where h_{k+1} = ratio * h_k.

    Assumes g(h) = L + sum_e c_e h^e over the given exponents (largest steps
    first). Eliminates each exponent in turn; a repeated exponent removes
    h^e * log(h) terms as well. Returns (estimate, change) where change is the
    magnitude of the last correction, a crude error indicator.

    Values may be floats or numpy arrays.
    """
    seq = [np.asarray(v) if isinstance(v, np.ndarray) else v for v in values]
    if len(seq) < 2:
        raise ValueError("need at least two samples to extrapolate")
    prev_last = seq[-1]
    for e in sorted(exponents):
        if len(seq) < 2:
            break
        w = ratio ** e
        seq = [(seq[k + 1] - w * seq[k]) / (1.0 - w) for k in range(len(seq) - 1)]
    estimate = seq[-1]
    change = float(np.linalg.norm(np.asarray(estimate - prev_last)))
    return estimate, change


def one_sided_derivative(
    func: Callable[[float], float],
    *,
    base_step: float = 1e-4,
    levels: int | None = None,
    exponents: Sequence[float] = (1.0, 2.0, 3.0),
    ratio: float = 0.5,
) -> tuple[float, float]:
    """Estimate d/dt func(t) at t = 0+ from one-sided quotients.

    Samples t = base_step * ratio^k for k < levels (default: enough levels to
    use every exponent plus two spares) and extrapolates the quotients.
    """
    if levels is None:
        levels = len(exponents) + 2
    if levels < 2:
        raise ValueError("need at least two levels")
    f0 = func(0.0)
    steps = [base_step * ratio ** k for k in range(levels)]
    quotients = [(func(t) - f0) / t for t in steps]
    return richardson(quotients, ratio=ratio, exponents=exponents)


def quotient_exponents(f: ScalarFunction, singular: bool) -> tuple[float, ...]:
    """Error exponents of the one-sided quotient of t -> Tr(P f(A + tB)).

    At a positive definite base point the quotient is analytic in t, so the
    integer powers suffice. At a singular base point each kernel branch
    lambda_i(t) ~ lambda_i'(0) t feeds f, contributing t^(1+p) type terms for
    f = x^p and t*log(t) terms for f = log (a repeated exponent in the list
    eliminates the log factor).

    For p < 0 the list doubles as a depth budget. The kernel summand
    f(lambda(t)) h(t) sits on an absolute rounding floor in h (a quadratic
    form of unit vectors), so the quotient noise grows like t^(p-1) as t
    shrinks, and the extrapolation amplifies whatever the smallest steps
    carry. one_sided_derivative samples len(exponents) + 2 halvings below
    the base step by default, so truncating the list for strongly negative
    p keeps the smallest step above the level where that noise would bury
    the estimate.
    """
    if not singular:
        return (1.0, 2.0, 3.0)
    if f.name == "log":
        return (1.0, 1.0, 2.0, 2.0, 3.0)
    if f.name == "power" and f.parameter is not None and -1.0 < f.parameter < 1.0 and f.parameter != 0.0:
        p = f.parameter
        if p <= -0.75:
            return tuple(sorted([1.0 + p, 1.0]))
        if p <= -0.25:
            return tuple(sorted([1.0 + p, 1.0, 2.0 + p]))
        if p < 0.0:
            return tuple(sorted([1.0 + p, 2.0 + p, 1.0, 2.0]))
        return tuple(sorted([1.0 + p, 2.0 + p, 1.0, 2.0, 3.0]))
    return (1.0, 2.0, 3.0)
