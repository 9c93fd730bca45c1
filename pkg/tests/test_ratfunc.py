from fractions import Fraction

import pytest
from hypothesis import given, settings

from funceq.errors import FieldDivisionError
from funceq.poly import MultiPoly, poly_gcd
from funceq.ratfunc import RatFunc

from strategies import nonzero_polys, ratfuncs


def test_canonical_form_cancels_and_normalizes():
    t = MultiPoly.var(1, 0)
    r = RatFunc((t ** 2 - 1).scale(3), (t - 1).scale(6))
    assert r.num == (t + 1).scale(Fraction(1, 2))
    assert r.den == MultiPoly.one(1)


def test_denominator_lex_leading_coefficient_is_one():
    x, y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    r = RatFunc(MultiPoly.one(2), (y - x).scale(-2))
    assert r.den.leading_coeff() == 1
    assert r.den == x - y


def test_inverse_of_difference():
    x, y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    r = RatFunc(x - y).inv()
    assert r.den == x - y and r.num == MultiPoly.one(2)


def test_zero_denominator_raises():
    with pytest.raises(FieldDivisionError):
        RatFunc(MultiPoly.one(1), MultiPoly.zero(1))
    with pytest.raises(ZeroDivisionError):
        RatFunc.zero(1).inv()


def test_quotient_rule():
    t = MultiPoly.var(1, 0)
    r = RatFunc(MultiPoly.one(1), t)
    assert r.derivative(0) == RatFunc(MultiPoly.const(1, -1), t ** 2)


@settings(max_examples=100, deadline=None)
@given(ratfuncs(2), ratfuncs(2), ratfuncs(2))
def test_field_laws(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * a.inv() == RatFunc.one(2)


@settings(max_examples=100, deadline=None)
@given(ratfuncs(2), ratfuncs(2))
def test_results_stay_canonical(a, b):
    for r in (a + b, a * b, a - b):
        if r.is_zero():
            assert r.den == MultiPoly.one(2)
            continue
        assert r.den.leading_coeff() == 1
        assert poly_gcd(r.num, r.den).is_constant()


@settings(max_examples=60, deadline=None)
@given(nonzero_polys(1), nonzero_polys(1))
def test_equal_fractions_have_equal_forms(p, q):
    assert RatFunc(p * q, q * q) == RatFunc(p, q)
