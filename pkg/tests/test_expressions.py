from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from conftest import X, k_elements, sympy_k
from htalgebra.errors import NonIntegralPoleError, ParseError, UnsupportedError
from htalgebra.expressions import format_rational, parse_k, tokenize
from htalgebra.localization import KElement, format_k


@pytest.mark.parametrize("text, value", [
    ("1/tau", 1),
    ("T^3(1/tau)", 1),
    ("tau(1)/tau(2)", 1),
    ("1/(tau*(tau-1))", 0),
    ("tau(-2)*tau", 1),
    ("3/(tau+2) - 1/(2*tau)", Fraction(5, 2)),
    ("dtau(1/tau)", 0),
    ("Delta(tau^2)", 0),
    ("1/tau^2 + 1/(x-4)", 1),
])
def test_trace_values(text, value):
    assert parse_k(text).trace() == value


@pytest.mark.parametrize("text, expr", [
    ("tau(3)", X * (X - 1) * (X - 2)),
    ("T^{-2}(tau^2)", (X - 2) ** 2),
    ("Dbar(tau(2))", X * (X - 1) - (X - 1) * (X - 2)),
    ("dtau(tau^3)", 3 * X ** 2),
    ("-(tau - 1)/(tau + 3)", -(X - 1) / (X + 3)),
    ("2·tau − 1", 2 * X - 1),
    ("tau(-1)", 1 / X),
])
def test_parsed_values_match_sympy(text, expr):
    assert sympy.simplify(sympy_k(parse_k(text)) - expr) == 0


def test_precedence_and_associativity():
    assert parse_k("1 - 2 - 3") == KElement.const(-4)
    assert parse_k("12/2/3") == KElement.const(2)
    assert parse_k("-tau^2") == -(KElement.tau(1) ** 2)


@given(k_elements)
def test_formatted_singular_parts_parse_back(f):
    sing = f.sing_part()
    text = format_k(sing).replace("x", "tau")
    assert parse_k(text) == sing


@pytest.mark.parametrize("text, pos", [("1 + ", 3), ("tau $ 2", 4), ("(tau", 4), ("foo(1)", 0), ("tau)", 3)])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_k(text)
    assert info.value.position == pos


def test_division_errors():
    with pytest.raises(NonIntegralPoleError):
        parse_k("1/(2*tau - 1)")
    with pytest.raises(NonIntegralPoleError):
        parse_k("1/(tau^2 + 1)")
    with pytest.raises(UnsupportedError):
        parse_k("tau/(1/tau)")
    with pytest.raises(ZeroDivisionError):
        parse_k("1/(tau - tau)")


def test_tokens():
    kinds = [t[0] for t in tokenize("T^{-1}(tau)")]
    assert kinds == ["name", "op", "op", "op", "int", "op", "op", "name", "op", "end"]


def test_format_rational():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-2, 6)) == "-1/3"
