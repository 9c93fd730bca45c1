from fractions import Fraction

import pytest
from hypothesis import given, settings

from funceq.diffop import (DiffOperator, act_automorphism, apply, apply_direct, derived,
                           indices_upto, leibniz_product)
from funceq.expr import parse_expression
from funceq.report import format_operator
from funceq.tower import partial

from strategies import Q_T, Q_T1T2, SQRT_T, elements, operators


def E(src, tower=Q_T):
    return parse_expression(src, tower)


def test_indices_upto_is_lex_ordered():
    assert indices_upto((1, 2)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert indices_upto((0,)) == [(0,)]


def test_apply_second_derivative():
    D = DiffOperator(Q_T, (2,), {(2,): E("1/(4*t^2)")})
    assert apply(D, E("t^4")) == E("3")
    assert apply(D, E("t")).is_zero()


def test_zero_coefficients_are_dropped():
    D = DiffOperator(Q_T, (2,), {(0,): Q_T.zero(), (1,): Q_T.one()})
    assert set(D.coeffs) == {(1,)}
    assert DiffOperator.zero(Q_T, (1,)).is_zero()


def test_derived_operator_coefficients():
    # D = t d^2 + d  ->  D_1 = 2 t d + 1,  D_2 = t
    D = DiffOperator(Q_T, (2,), {(2,): Q_T.var(0), (1,): Q_T.one()})
    assert derived(D, (0,)) == D
    assert derived(D, (1,)) == DiffOperator(Q_T, (1,), {(1,): 2 * Q_T.var(0), (0,): Q_T.one()})
    assert derived(D, (2,)) == DiffOperator(Q_T, (0,), {(0,): Q_T.var(0)})
    assert derived(D, (3,)).is_zero()


def test_act_automorphism():
    D = DiffOperator(Q_T, (1,), {(1,): E("t^2 + t")})
    img = act_automorphism(D, {"t": E("-t")})
    assert img.coeff((1,)) == E("t^2 - t")


def test_format_operator():
    D = DiffOperator(Q_T, (2,), {(2,): E("1/(4*t^2)")})
    assert format_operator(D) == "(1/(4*t^2)) * d^2"
    K = DiffOperator(Q_T1T2, (1, 1), {(0, 0): Q_T1T2.one(), (1, 1): Q_T1T2.var(0)})
    assert format_operator(K) == "1 + t1 * d1*d2"


@settings(max_examples=60, deadline=None)
@given(operators(Q_T1T2), elements(Q_T1T2, 1), elements(Q_T1T2, 1))
def test_leibniz_identity(D, x, y):
    assert leibniz_product(D, x, y) == apply(D, x * y)


@settings(max_examples=60, deadline=None)
@given(operators(SQRT_T), elements(SQRT_T, 1))
def test_apply_agrees_with_direct(D, x):
    assert apply(D, x) == apply_direct(D, x)


@settings(max_examples=40, deadline=None)
@given(operators(Q_T), elements(Q_T, 1))
def test_commutes_with_derivation(D, x):
    # d(D(x)) = D(dx) + (dD)(x), where dD differentiates the coefficients
    dD = DiffOperator(Q_T, D.bounds, {i: partial(0, c) for i, c in D.coeffs.items()})
    assert partial(0, apply(D, x)) == apply(D, partial(0, x)) + apply(dD, x)
