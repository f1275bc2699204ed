from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from exclusion.scalars import Dual, Jet, float_repr, format_rational, parse_rational

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
nonzero_rationals = rationals.filter(lambda x: x != 0)


def test_parse_rational():
    assert parse_rational("2/3") == F(2, 3)
    assert parse_rational("-7") == F(-7)
    assert parse_rational(" 5/10 ") == F(1, 2)
    for bad in ("1/0", "a", "1.5", "", "2/3/4"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_rational():
    assert format_rational(F(2, 3)) == "2/3"
    assert format_rational(F(4)) == "4"
    assert format_rational(F(-6, 4)) == "-3/2"


def test_float_repr_17_digits():
    assert float_repr(F(1, 3)) == "0.33333333333333331"


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_dual_arithmetic():
    x = Dual.variable(F(3))
    y = x * x  # d/dx x^2 = 2x
    assert y.value == 9 and y.deriv == 6
    z = (x + 1) / (x - 1)
    # derivative of (x+1)/(x-1) = -2/(x-1)^2 -> -1/2 at 3
    assert z.value == 2 and z.deriv == F(-1, 2)
    assert x ** 4 == Dual(81, 108)
    assert Dual(2, 0) == 2
    assert Dual(2, 1) != 2


def test_dual_zero_division():
    with pytest.raises(ZeroDivisionError):
        Dual(1, 1) / Dual(0, 5)


@given(nonzero_rationals, rationals, nonzero_rationals.filter(lambda x: x != 3))
def test_dual_chain_rule(p, q, x0):
    # f(y) = y^2 + p y + q composed with g(x) = (p x + q)/(x - 3)
    def g(x):
        return (p * x + q) / (x - 3)

    def f(y):
        return y * y + p * y + q

    composed = f(g(Dual.variable(x0)))
    g0 = g(x0)
    gp = (p * x0 + q) * F(-1) / (x0 - 3) ** 2 + p / (x0 - 3)
    fp = 2 * g0 + p
    assert composed.value == f(g0)
    assert composed.deriv == fp * gp


def test_jet_variable_and_division():
    x = Jet.variable(F(2), 4)
    y = (x * x - 4) / (x - 2)  # removable singularity: equals x + 2
    assert y.value == 4
    assert y.deriv == 1


def test_jet_valuation_mismatch_is_pole():
    x = Jet.variable(F(1), 4)
    with pytest.raises(ZeroDivisionError):
        (x + 1) / (x - 1)


def test_jet_order_drops_with_valuation():
    x = Jet.variable(F(0), 3)
    y = (x * x) / x
    assert y.order == 2
    assert y.value == 0 and y.deriv == 1


def test_jet_matches_dual_on_regular_functions():
    def f(s):
        return (s * s + 1) / (s + 2)

    d = f(Dual.variable(F(5)))
    j = f(Jet.variable(F(5), 3))
    assert (d.value, d.deriv) == (j.value, j.deriv)
