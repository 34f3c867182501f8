import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracefn.errors import DomainError
from tracefn.scalar_functions import (
    Regime,
    builtin,
    custom,
    divided_difference,
    is_reciprocal,
)

SEAM_TOL = 1e-5
FD_REL_TOL = 1e-6

ALL_BUILTINS = [
    builtin("log"),
    builtin("inverse"),
    builtin("identity"),
    builtin("square"),
    builtin("power", 0.5),
    builtin("power", -0.5),
    builtin("power", 0.9),
    builtin("power", -0.9),
]

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def test_builtin_flags():
    p_half = builtin("power", 0.5)
    assert p_half.tf_limit_zero
    assert p_half.extends_to_zero == 0.0

    log = builtin("log")
    assert log.tf_limit_zero
    assert log.extends_to_zero is None

    inv = builtin("inverse")
    assert not inv.tf_limit_zero
    assert inv.extends_to_zero is None

    p_neg = builtin("power", -0.5)
    assert p_neg.tf_limit_zero
    assert p_neg.extends_to_zero is None


def test_builtin_rejects_bad_specs():
    with pytest.raises(DomainError):
        builtin("power")
    with pytest.raises(DomainError):
        builtin("log", parameter=2.0)
    with pytest.raises(DomainError):
        builtin("exp")


def test_is_reciprocal():
    assert is_reciprocal(builtin("inverse"))
    assert is_reciprocal(builtin("power", -1.0))
    assert not is_reciprocal(builtin("power", -0.5))
    assert not is_reciprocal(builtin("log"))


def test_divided_difference_examples():
    assert divided_difference(builtin("log"), 2.0, 2.0).value == pytest.approx(0.5)
    assert divided_difference(builtin("log"), 2.0, 2.0).regime is Regime.DIAGONAL
    assert divided_difference(builtin("inverse"), 2.0, 3.0).value == pytest.approx(-1 / 6)
    assert divided_difference(builtin("square"), 1.0, 2.0).value == pytest.approx(3.0)
    assert divided_difference(builtin("power", 0.5), 1.0, 4.0).value == pytest.approx(1 / 3)


def test_divided_difference_regimes():
    f = builtin("log")
    assert divided_difference(f, 1.0, 1.0 + 1e-9).regime is Regime.NEAR_DIAGONAL
    assert divided_difference(f, 1.0, 2.0).regime is Regime.OFF_DIAGONAL


def test_divided_difference_rejects_nonpositive():
    f = builtin("log")
    for x, y in ((0.0, 1.0), (1.0, 0.0), (-1.0, 2.0)):
        with pytest.raises(DomainError):
            divided_difference(f, x, y)


@pytest.mark.parametrize("f", ALL_BUILTINS, ids=repr)
@given(x=positive, y=positive)
@settings(max_examples=60, deadline=None)
def test_divided_difference_symmetry_exact(f, x, y):
    # negation and division are exact sign flips in IEEE, so bit-equality holds
    assert divided_difference(f, x, y).value == divided_difference(f, y, x).value


@pytest.mark.parametrize("f", ALL_BUILTINS, ids=repr)
@given(x=positive, y=positive)
@settings(max_examples=60, deadline=None)
def test_divided_difference_mean_value_containment(f, x, y):
    # every builtin has monotone f', so the mean-value point pins the quotient
    # between the endpoint derivatives
    dd = divided_difference(f, x, y).value
    lo = min(f.deriv(x), f.deriv(y))
    hi = max(f.deriv(x), f.deriv(y))
    slack = 1e-9 * (1.0 + max(abs(lo), abs(hi)))
    assert lo - slack <= dd <= hi + slack


@pytest.mark.parametrize("f", ALL_BUILTINS, ids=repr)
def test_divided_difference_seam_continuity(f):
    x = 1.3
    for side in (0.999, 1.001):
        y = x * (1.0 + side * 1e-7)
        across = divided_difference(f, x, y).value
        at_mid = f.deriv((x + y) / 2.0)
        assert abs(across - at_mid) <= SEAM_TOL * (1.0 + abs(at_mid))


@pytest.mark.parametrize("f", ALL_BUILTINS, ids=repr)
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_deriv_matches_central_difference(f, x):
    h = 1e-6 * x
    fd = (f.eval(x + h) - f.eval(x - h)) / (2 * h)
    assert abs(f.deriv(x) - fd) <= FD_REL_TOL * (1.0 + abs(fd))


@pytest.mark.parametrize("p", [0.5, -0.5, 0.9, -0.9, 2.0])
@pytest.mark.parametrize("x", [0.25, 1.0, 7.5])
def test_power_diagonal_value(p, x):
    f = builtin("power", p)
    expected = p * x ** (p - 1.0)
    got = divided_difference(f, x, x).value
    assert abs(got - expected) <= 1e-12 * abs(expected)


def test_custom_consistent_no_warning():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        f = custom(
            "cube", lambda x: x**3, lambda x: 3 * x * x,
            tf_limit_zero=True, extends_to_zero=0.0,
        )
    assert f.eval(2.0) == 8.0


def test_custom_warns_on_false_vanishing_claim():
    with pytest.warns(UserWarning, match="do not decay"):
        custom("recip", lambda x: 1.0 / x, lambda x: -1.0 / (x * x), tf_limit_zero=True)


def test_custom_warns_on_missed_vanishing():
    with pytest.warns(UserWarning, match="decay to ~0"):
        custom("root", math.sqrt, lambda x: 0.5 / math.sqrt(x), tf_limit_zero=False)


def test_custom_warns_on_inconsistent_flags():
    with pytest.warns(UserWarning, match="inconsistent"):
        custom(
            "odd",
            lambda x: 1.0 / x,
            lambda x: -1.0 / (x * x),
            tf_limit_zero=False,
            extends_to_zero=1.0,
        )
