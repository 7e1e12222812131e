"""Notation parsing and printing for the three expression kinds."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from montyknot.errors import MontyknotError
from montyknot.notation import (
    Montesinos,
    ParseError,
    Pretzel,
    TwoBridge,
    parse,
    print_expr,
)


def F(p, q):
    return Fraction(p, q)


def test_parse_anchors():
    assert parse("M(1/3,1/2,2/5|0)") == Montesinos((F(1, 3), F(1, 2), F(2, 5)), 0)
    assert parse("M( -1/3 , -1/3 , -2/5 | 1 )") == Montesinos((F(-1, 3),) * 2 + (F(-2, 5),), 1)
    assert parse("M(|3)") == Montesinos((), 3)
    assert parse("P(-2,3,7)") == Pretzel((-2, 3, 7))
    assert parse("B(17/7)") == TwoBridge(17, 7)
    assert parse("B(1/0)") == TwoBridge(1, 0)


def test_montesinos_integer_absorption():
    # integer parts of out-of-range slopes migrate into e
    assert parse("M(7/3|0)") == Montesinos((F(1, 3),), 2)
    assert parse("M(-7/3|0)") == Montesinos((F(2, 3),), -3)
    assert parse("M(3/1|0)") == Montesinos((), 3)
    assert parse("M(2, 1/2 | -1)") == Montesinos((F(1, 2),), 1)
    assert parse("M(1/-3|0)") == Montesinos((F(-1, 3),), 0)


def test_two_bridge_folding():
    assert parse("B(5/7)") == TwoBridge(5, 2)
    # in-range negative beta is a chirality spelling and survives as written;
    # only out-of-range values fold mod alpha
    assert parse("B(5/-2)") == TwoBridge(5, -2)
    assert parse("B(-5/2)") == TwoBridge(5, -2)
    assert parse("B(5/-7)") == TwoBridge(5, 3)
    assert parse("B(1/9)") == TwoBridge(1, 0)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse("M(1/4|0")
    assert err.value.position == 8
    assert "column 8" in str(err.value)

    for text in ("M(2/4|0)", "M(1/0|0)", "B(6/4)", "B(0/1)", "P(1,0,3)",
                 "Q(1/2)", "", "M(1/2|0) junk", "P()", "B(3)"):
        with pytest.raises(ParseError):
            parse(text)
    assert issubclass(ParseError, MontyknotError)


def test_print_anchors():
    assert print_expr(Montesinos((F(-1, 3), F(-1, 3), F(-2, 5)), 1)) == "M(-1/3,-1/3,-2/5|1)"
    assert print_expr(Montesinos((), 0)) == "M(|0)"
    assert print_expr(Pretzel((-2, 3, 7))) == "P(-2,3,7)"
    assert print_expr(TwoBridge(3, 1)) == "B(3/1)"
    assert print_expr(TwoBridge(1, 0)) == "B(1/0)"
    with pytest.raises(TypeError):
        print_expr("M(|0)")


def test_dataclass_validation():
    with pytest.raises(ValueError):
        Montesinos((F(3, 2),), 0)  # |beta| >= alpha
    with pytest.raises(ValueError):
        Montesinos((Fraction(2),), 0)  # integer slope
    with pytest.raises(ValueError):
        Pretzel(())
    with pytest.raises(ValueError):
        Pretzel((1, 0))
    with pytest.raises(ValueError):
        TwoBridge(4, 2)
    with pytest.raises(ValueError):
        TwoBridge(3, 3)
    with pytest.raises(ValueError):
        TwoBridge(1, 1)


slope = st.tuples(
    st.integers(min_value=2, max_value=12), st.integers(min_value=1, max_value=11),
    st.booleans(),
).filter(lambda t: t[1] < t[0] and gcd(t[0], t[1]) == 1).map(
    lambda t: Fraction(-t[1] if t[2] else t[1], t[0]))

montesinos_exprs = st.tuples(
    st.lists(slope, max_size=5), st.integers(min_value=-9, max_value=9),
).map(lambda t: Montesinos(tuple(t[0]), t[1]))

pretzel_exprs = st.lists(
    st.integers(min_value=-9, max_value=9).filter(bool), min_size=1, max_size=6,
).map(lambda qs: Pretzel(tuple(qs)))

two_bridge_exprs = st.one_of(
    st.just(TwoBridge(1, 0)),
    st.tuples(
        st.integers(min_value=2, max_value=40), st.integers(min_value=1, max_value=39),
        st.booleans(),
    ).filter(lambda t: t[1] < t[0] and gcd(t[0], t[1]) == 1).map(
        lambda t: TwoBridge(t[0], -t[1] if t[2] else t[1])),
)


@given(st.one_of(montesinos_exprs, pretzel_exprs, two_bridge_exprs))
def test_print_parse_round_trip(expr):
    assert parse(print_expr(expr)) == expr
