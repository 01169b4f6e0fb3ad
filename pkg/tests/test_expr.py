import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ivapprox.errors import ParseError
from ivapprox.expr import BinOp, Call, Neg, Num, Pow, Var, compile_expr, evaluate, parse, pretty

leaves = st.one_of(
    st.just(Var()),
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(Num),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.integers(-3, 5)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(["sin", "cos", "exp", "abs"]), children).map(lambda t: Call(t[0], (t[1],))),
        st.tuples(st.sampled_from(["min", "max"]), children, children).map(lambda t: Call(t[0], (t[1], t[2]))),
    )


asts = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(asts)
def test_pretty_round_trip(node):
    assert parse(pretty(node)) == node


@pytest.mark.parametrize(
    "text,x,expected",
    [
        ("1 - x", 0.25, 0.75),
        ("-(1-x)", 0.0, -1.0),
        ("x - x^2", 0.5, 0.25),
        ("2^-1", 0.0, 0.5),
        ("-x^2", 3.0, -9.0),
        ("min(x, 1 - x) * 2", 0.3, 0.6),
        ("max(sin(x), cos(x))", 0.0, 1.0),
        ("abs(x - 3) / 2", 1.0, 1.0),
        ("exp(0) + 1e-1", 0.0, 1.1),
        ("8 / 4 / 2", 0.0, 1.0),
        ("2 - 3 - 4", 0.0, -5.0),
    ],
)
def test_evaluate_examples(text, x, expected):
    assert float(compile_expr(text)(x)) == pytest.approx(expected, abs=1e-15)


def test_vectorized_constant():
    fn = compile_expr("3")
    xs = np.linspace(0, 1, 5)
    assert fn(xs).shape == (5,)
    assert np.all(fn(xs) == 3.0)


def test_vectorized_matches_math():
    fn = compile_expr("sin(x)^2 + cos(x)^2")
    xs = np.linspace(-5, 5, 101)
    assert np.allclose(fn(xs), 1.0, atol=1e-15)
    assert float(compile_expr("exp(x)")(1.0)) == math.e


def test_unclosed_parenthesis():
    with pytest.raises(ParseError) as info:
        parse("sin(x")
    assert "unclosed parenthesis" in str(info.value)
    assert info.value.position == 5
    assert ")" in info.value.expected


@pytest.mark.parametrize("text", ["", "x +", "foo(x)", "x ^ 1.5", "min(x)", "sin(x, x)", "2 3", "x)", "@"])
def test_rejects_bad_input(text):
    with pytest.raises(ParseError):
        parse(text)


def test_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse("1 + * 2")
    assert info.value.position == 4
