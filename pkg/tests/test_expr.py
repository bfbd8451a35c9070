"""Expression grammar: precedence, exact decimals, error positions."""

from fractions import Fraction

import pytest

from hypershade.expr import ExpressionError, parse_expression
from hypershade.poly import Polynomial, VariableSpace

XYZ = VariableSpace(("x", "y", "z"))


def test_sphere_equation_parses():
    p = parse_expression("(x - 1)^2 + (y + 4)^2 + (z - 5)^2 - 4", XYZ)
    assert p.degree() == 2
    assert p.evaluate((Fraction(1), Fraction(-4), Fraction(3))) == 0


def test_zero_exponent_is_one():
    assert parse_expression("x^0", XYZ) == Polynomial.constant(XYZ, 1)


def test_decimals_are_exact_rationals():
    p = parse_expression("-1.5", XYZ)
    assert p.constant_value() == Fraction(-3, 2)
    q = parse_expression("0.25*x + 0.1", XYZ)
    assert q.evaluate((Fraction(0), 0, 0)) == Fraction(1, 10)
    assert q.evaluate((Fraction(4), 0, 0)) == Fraction(11, 10)


def test_precedence_power_binds_tighter_than_minus():
    # ^ > unary minus > * > binary +/-
    assert parse_expression("-x^2", XYZ) == -parse_expression("x^2", XYZ)
    assert parse_expression("2*x^3", XYZ) != parse_expression("(2*x)^3", XYZ)
    assert parse_expression("1 - -3", XYZ) == Polynomial.constant(XYZ, 4)


def test_unknown_identifier_rejected_with_position():
    with pytest.raises(ExpressionError) as err:
        parse_expression("x + nope", XYZ)
    assert "nope" in str(err.value) and "column" in str(err.value)


def test_malformed_exponent_rejected():
    for text in ("x^-1", "x^(2)", "x^y"):
        with pytest.raises(ExpressionError):
            parse_expression(text, XYZ)


def test_unbalanced_parens_rejected():
    with pytest.raises(ExpressionError):
        parse_expression("(x + 1", XYZ)
    with pytest.raises(ExpressionError):
        parse_expression("x + 1)", XYZ)


def test_implicit_multiplication_rejected():
    with pytest.raises(ExpressionError):
        parse_expression("2 x", XYZ)
    with pytest.raises(ExpressionError):
        parse_expression("x y", XYZ)
