import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funceq.errors import ExprError, ExprSyntaxError, UnknownSymbolError, ZeroDenominatorError
from funceq.expr import format_element, parse_expression

from strategies import Q_T, Q_T1T2, SQRT_T, elements, towers


def test_basic_expressions():
    t = Q_T.var(0)
    assert parse_expression("t^3 + t", Q_T) == t ** 3 + t
    t1, t2 = Q_T1T2.var(0), Q_T1T2.var(1)
    assert parse_expression("(t1^3+t2^3)", Q_T1T2) == t1 ** 3 + t2 ** 3
    assert parse_expression("-2/3*t", Q_T) == Q_T.const(-2) / 3 * t
    assert parse_expression("2*u^3", SQRT_T) == parse_expression("2*t*u", SQRT_T)


def test_zero_denominator():
    with pytest.raises(ZeroDenominatorError):
        parse_expression("1/(t - t)", Q_T)


def test_syntax_error_positions():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression("t + * 2", Q_T)
    assert info.value.position == 4
    with pytest.raises(ExprSyntaxError):
        parse_expression("", Q_T)
    with pytest.raises(ExprSyntaxError):
        parse_expression("t^-1", Q_T)
    with pytest.raises(ExprSyntaxError):
        parse_expression("(t + 1", Q_T)


def test_unknown_symbol():
    with pytest.raises(UnknownSymbolError):
        parse_expression("s + 1", Q_T)


def test_format_examples():
    assert format_element(parse_expression("1/(4*t^2)", Q_T)) == "1/(4*t^2)"
    assert format_element(Q_T.zero()) == "0"


@settings(max_examples=100, deadline=None)
@given(towers.flatmap(elements))
def test_round_trip(x):
    assert parse_expression(format_element(x), x.tower) == x


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="t12u+-*/^() ", max_size=12))
def test_fuzz_raises_structured_errors_only(src):
    try:
        parse_expression(src, SQRT_T)
    except ExprError:
        pass
