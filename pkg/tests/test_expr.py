import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from g2lab.riemann4 import ParseError, evaluate, parse_expr, to_sympy

X = np.array([0.3, -0.7, 1.1, 0.25])


@pytest.mark.parametrize("src, expected", [
    ("1 + 2*3", 7.0),
    ("-x1^2", -0.09),
    ("2^3^2", 512.0),
    ("2^-1", 0.5),
    ("(x1 + x2) * x3", (0.3 - 0.7) * 1.1),
    ("sqrt(4) / 2", 1.0),
    ("exp(0) + cos(0) + sin(0)", 2.0),
    ("1.5e2 - 50", 100.0),
    ("--x4", 0.25),
])
def test_evaluate(src, expected):
    assert evaluate(parse_expr(src), X) == pytest.approx(expected)


@pytest.mark.parametrize("src, col", [
    ("1 +", 4),
    ("2 * (x1", 8),
    ("foo(x1)", 1),
    ("x5 + 1", 1),
    ("3 $ 4", 3),
    ("sin x1", 5),
])
def test_errors_carry_columns(src, col):
    with pytest.raises(ParseError) as info:
        parse_expr(src)
    assert info.value.line == 1
    assert info.value.column == col


def test_position_offset():
    with pytest.raises(ParseError) as info:
        parse_expr("1 + )", line=4, column=10)
    assert (info.value.line, info.value.column) == (4, 14)


exprs = st.recursive(
    st.sampled_from(["x1", "x2", "x3", "x4", "1", "2.5", "0.5"]),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from("+-*"), inner).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), inner).map(lambda t: f"{t[0]}({t[1]})"),
        inner.map(lambda s: f"-{s}"),
    ),
    max_leaves=8,
)


@given(exprs)
def test_sympy_agrees_with_tree_walker(src):
    node = parse_expr(src)
    syms = sp.symbols("x1:5")
    val = float(to_sympy(node, syms).subs(dict(zip(syms, X))))
    ref = float(evaluate(node, X))
    assert math.isclose(val, ref, rel_tol=1e-10, abs_tol=1e-10)
