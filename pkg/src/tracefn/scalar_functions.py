"""Scalar functions on (0, inf) and their first divided differences.

A ScalarFunction carries the two flags that decide how the trace functional
treats singular matrices: extends_to_zero (a finite limit at 0+, if any) and
tf_limit_zero (whether t*f(t) -> 0 as t -> 0+). The built-in catalog covers
log, power:p, inverse, identity and square.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError

NEAR_DIAGONAL_DELTA = 1e-7


class Regime(enum.Enum):
    DIAGONAL = "diagonal"
    NEAR_DIAGONAL = "near_diagonal"
    OFF_DIAGONAL = "off_diagonal"


@dataclass(frozen=True)
class DividedDifference:
    value: float
    regime: Regime


@dataclass(frozen=True)
class ScalarFunction:
    name: str
    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    extends_to_zero: float | None
    tf_limit_zero: bool
    parameter: float | None = None

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def __repr__(self) -> str:
        if self.parameter is not None and self.name == "power":
            return f"ScalarFunction(power:{self.parameter:g})"
        return f"ScalarFunction({self.name})"


def builtin(name: str, parameter: float | None = None) -> ScalarFunction:
    """Catalog lookup: log | power (with exponent) | inverse | identity | square."""
    if name == "power":
        if parameter is None:
            raise DomainError("power requires an exponent parameter")
        p = float(parameter)
        if p > 0:
            extends: float | None = 0.0
        elif p == 0:
            extends = 1.0
        else:
            extends = None
        return ScalarFunction(
            "power",
            lambda x, _p=p: x ** _p,
            lambda x, _p=p: _p * x ** (_p - 1.0),
            extends,
            p > -1.0,
            p,
        )
    if parameter is not None:
        raise DomainError(f"{name} takes no parameter")
    if name == "log":
        return ScalarFunction("log", math.log, lambda x: 1.0 / x, None, True)
    if name == "inverse":
        # inverse is power with p = -1; t * (1/t) = 1 does not vanish.
        return ScalarFunction(
            "inverse", lambda x: 1.0 / x, lambda x: -1.0 / (x * x), None, False, -1.0
        )
    if name == "identity":
        return ScalarFunction("identity", lambda x: x, lambda x: 1.0, 0.0, True)
    if name == "square":
        return ScalarFunction("square", lambda x: x * x, lambda x: 2.0 * x, 0.0, True)
    raise DomainError(f"unknown scalar function {name!r}")


def custom(
    name: str,
    eval: Callable[[float], float],
    deriv: Callable[[float], float],
    tf_limit_zero: bool,
    extends_to_zero: float | None = None,
) -> ScalarFunction:
    """Wrap a user-supplied differentiable function on (0, inf).

    The tf_limit_zero flag is spot-checked numerically at t in {1e-4, 1e-6,
    1e-8}; a mismatch only warns, since three samples cannot prove a limit.
    """
    samples = [abs(t * eval(t)) for t in (1e-4, 1e-6, 1e-8)]
    looks_vanishing = samples[-1] <= 1e-3 and samples[2] <= samples[0] * 1.01 + 1e-12
    if tf_limit_zero and not looks_vanishing:
        warnings.warn(
            f"{name}: tf_limit_zero=True but |t*f(t)| samples {samples} do not decay",
            stacklevel=2,
        )
    if not tf_limit_zero and looks_vanishing and extends_to_zero is None:
        warnings.warn(
            f"{name}: tf_limit_zero=False but |t*f(t)| samples {samples} decay to ~0",
            stacklevel=2,
        )
    if extends_to_zero is not None and not tf_limit_zero:
        warnings.warn(
            f"{name}: a finite limit at 0+ forces t*f(t) -> 0; flags are inconsistent",
            stacklevel=2,
        )
    return ScalarFunction(name, eval, deriv, extends_to_zero, tf_limit_zero)


def is_reciprocal(f: ScalarFunction) -> bool:
    return f.name == "inverse" or (f.name == "power" and f.parameter == -1.0)


def divided_difference(f: ScalarFunction, x: float, y: float) -> DividedDifference:
    """First divided difference f[1](x, y) for x, y > 0.

    Exactly symmetric in (x, y). Within relative distance NEAR_DIAGONAL_DELTA
    the quotient would lose most of its digits to cancellation, so it is
    replaced by f'((x+y)/2).
    """
    if x <= 0.0 or y <= 0.0:
        raise DomainError(f"divided difference needs positive arguments, got ({x}, {y})")
    if x == y:
        return DividedDifference(f.deriv(x), Regime.DIAGONAL)
    if abs(x - y) <= NEAR_DIAGONAL_DELTA * max(x, y):
        return DividedDifference(f.deriv((x + y) / 2.0), Regime.NEAR_DIAGONAL)
    return DividedDifference((f.eval(x) - f.eval(y)) / (x - y), Regime.OFF_DIAGONAL)
