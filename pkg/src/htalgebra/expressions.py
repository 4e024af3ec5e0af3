"""Parser for textual elements of K.

Grammar (standard precedence, left associative):

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "·" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" INT)?
    atom    := NUMBER | "tau" | "x" | "tau(" INT ")" | "(" expr ")"
             | "T" ("^" SIGNED_INT)? "(" expr ")"
             | ("Delta" | "Dbar" | "dtau") "(" expr ")"

``tau`` alone is tau(1), the identity sequence.  Division is allowed only
by polynomials whose roots are all integers.
"""
from __future__ import annotations

import re
from fractions import Fraction

from ._poly import Poly, integer_roots
from .errors import NonIntegralPoleError, ParseError, UnsupportedError
from .localization import KElement, RationalForm, k_normalize

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\{|\}|\^|\(|\)|\+|-|−|\*|·|/))")


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", {"−": "-", "·": "*"}.get(op, op), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}", tok[2])
        return tok

    def at_op(self, *ops):
        tok = self.peek()
        return tok[0] == "op" and tok[1] in ops

    def parse(self) -> KElement:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("unexpected trailing input", tok[2])
        return value

    def expr(self) -> KElement:
        value = self.term()
        while self.at_op("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> KElement:
        value = self.unary()
        while self.at_op("*", "/"):
            op = self.take()[1]
            pos = self.peek()[2]
            rhs = self.unary()
            value = value * rhs if op == "*" else divide(value, rhs, pos)
        return value

    def unary(self) -> KElement:
        if self.at_op("-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> KElement:
        value = self.atom()
        if self.at_op("^"):
            self.take()
            exp = self.expect("int")[1]
            value = value ** exp
        return value

    def signed_int(self) -> int:
        braced = self.at_op("{")
        if braced:
            self.take()
        sign = 1
        if self.at_op("-"):
            self.take()
            sign = -1
        value = sign * self.expect("int")[1]
        if braced:
            self.expect("op", "}")
        return value

    def parenthesized(self) -> KElement:
        self.expect("op", "(")
        value = self.expr()
        self.expect("op", ")")
        return value

    def atom(self) -> KElement:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return KElement.const(value)
        if kind == "op" and value == "(":
            return self.parenthesized()
        if kind != "name":
            raise ParseError("expected a number, symbol or parenthesis", pos)
        self.take()
        if value in ("tau", "x"):
            if value == "tau" and self.at_op("("):
                self.take()
                neg = self.at_op("-")
                if neg:
                    self.take()
                l = self.expect("int")[1]
                self.expect("op", ")")
                return KElement.tau(-l if neg else l)
            return KElement.tau(1)
        if value == "T":
            n = 1
            if self.at_op("^"):
                self.take()
                n = self.signed_int()
            return self.parenthesized().shift(n)
        if value == "Delta":
            f = self.parenthesized()
            return f.shift(1) - f
        if value == "Dbar":
            f = self.parenthesized()
            return f - f.shift(-1)
        if value == "dtau":
            return self.parenthesized().derivative(1)
        raise ParseError(f"unknown symbol {value!r}", pos)


def divide(num: KElement, den: KElement, position: int = 0) -> KElement:
    """num / den for a polynomial den with integer roots."""
    if den.sing:
        raise UnsupportedError(f"division by a non-polynomial element at position {position}")
    poly = den.poly
    if not poly:
        raise ZeroDivisionError("division by zero")
    roots = integer_roots(poly)
    rest, _ = poly.divmod(Poly.from_roots([r for r, d in roots.items() for _ in range(d)]))
    if rest.degree > 0:
        raise NonIntegralPoleError(f"denominator has non-integer roots (position {position})")
    inverse = k_normalize(RationalForm(Fraction(1) / rest.coeffs[0], roots)) if roots else \
        KElement.const(Fraction(1) / rest.coeffs[0])
    return num * inverse


def parse_k(text: str) -> KElement:
    return _Parser(text).parse()


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
