"""Grammar, precedence, error positions, and the serialize round-trip."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curved_rs.errors import EvalError, ParseError
from curved_rs.exprparse import (
    BinOp,
    Call,
    Neg,
    Num,
    Var,
    evaluate,
    free_symbols,
    parse_expression,
    to_text,
)


def ev(text, **bindings):
    return evaluate(parse_expression(text), bindings)


class TestPrecedence:
    def test_sum_vs_product(self):
        assert ev("2 + 3 * 4") == 14.0
        assert ev("2 * 3 + 4") == 10.0

    def test_power_binds_tightest(self):
        assert ev("2 * 3 ^ 2") == 18.0
        assert ev("-3 ^ 2") == -9.0  # unary minus looser than ^

    def test_power_right_associative(self):
        assert ev("2 ^ 3 ^ 2") == 512.0

    def test_negative_exponent(self):
        assert ev("2 ^ -2") == 0.25

    def test_parentheses(self):
        assert ev("(2 + 3) * 4") == 20.0
        assert ev("(-3) ^ 2") == 9.0

    def test_division_left_associative(self):
        assert ev("12 / 3 / 2") == 2.0

    def test_double_unary_minus(self):
        assert ev("--3") == 3.0


class TestExamples:
    def test_schwarzschild_g00(self):
        assert ev("1 - 2*M/r", M=1.0, r=4.0) == pytest.approx(0.5)

    def test_schwarzschild_g11(self):
        assert ev("-(1 - 2*M/r)^(-1)", M=1.0, r=4.0) == pytest.approx(-2.0)

    def test_functions_and_pi(self):
        assert ev("sin(pi/2)") == pytest.approx(1.0)
        assert ev("sqrt(2)^2") == pytest.approx(2.0)
        assert ev("cosh(x)^2 - sinh(x)^2", x=0.7) == pytest.approx(1.0)
        assert ev("log(exp(3))") == pytest.approx(3.0)


class TestParseErrors:
    def test_dangling_operator_position(self):
        with pytest.raises(ParseError) as err:
            parse_expression("1 - 2*M/")
        assert err.value.line == 1
        assert err.value.column == 9  # just past the '/' at column 8
        assert err.value.expected

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse_expression("(1 + 2")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_expression("1 + 2 )")

    def test_function_needs_parens(self):
        with pytest.raises(ParseError):
            parse_expression("sin 3")

    def test_unknown_character(self):
        with pytest.raises(ParseError):
            parse_expression("1 ? 2")


class TestEvalErrors:
    def test_sqrt_of_negative(self):
        with pytest.raises(EvalError):
            ev("sqrt(x)", x=-1.0)

    def test_log_of_zero(self):
        with pytest.raises(EvalError):
            ev("log(x)", x=0.0)

    def test_division_by_zero(self):
        with pytest.raises(EvalError):
            ev("1 / x", x=0.0)

    def test_unbound_symbol(self):
        with pytest.raises(EvalError):
            ev("1 + q")

    def test_fractional_power_of_negative(self):
        with pytest.raises(EvalError):
            ev("x ^ 0.5", x=-2.0)


def test_free_symbols():
    ast = parse_expression("1 - 2*M/r + sin(theta) * pi")
    assert free_symbols(ast) == {"M", "r", "theta"}


# --- round-trip property -----------------------------------------------------

_names = st.sampled_from(["r", "theta", "M", "alpha", "x1"])
_funcs = st.sampled_from(["sin", "cos", "exp", "sqrt", "sinh", "cosh", "tan", "log"])


def _exprs():
    leaves = st.one_of(
        st.floats(min_value=0.0, max_value=1e6, allow_nan=False,
                  allow_infinity=False).map(Num),
        _names.map(Var),
    )

    def extend(children):
        return st.one_of(
            children.map(Neg),
            st.tuples(_funcs, children).map(lambda t: Call(*t)),
            st.tuples(st.sampled_from("+-*/^"), children, children).map(
                lambda t: BinOp(*t)
            ),
        )

    return st.recursive(leaves, extend, max_leaves=25)


@settings(max_examples=200, deadline=None)
@given(_exprs())
def test_roundtrip_parse_of_serialized_ast(ast):
    assert parse_expression(to_text(ast)) == ast


@settings(max_examples=50, deadline=None)
@given(_exprs())
def test_serialization_is_stable(ast):
    text = to_text(ast)
    assert to_text(parse_expression(text)) == text


def test_referential_transparency():
    ast = parse_expression("sin(r) * exp(-M/2) + r^3 / (1 + M)")
    bindings = {"r": 1.234567, "M": 0.891}
    first = evaluate(ast, bindings)
    for _ in range(5):
        assert evaluate(ast, bindings) == first  # bit-identical
