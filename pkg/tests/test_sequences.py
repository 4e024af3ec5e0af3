from fractions import Fraction
from math import comb, factorial

import sympy
from hypothesis import given, strategies as st

from conftest import X, czpol_elements, ht_elements, sympy_czpol
from htalgebra.hopf import HtElement
from htalgebra.sequences import (CzpolElement, czpol_from_json, czpol_mul, czpol_to_json, derivative_by_dbar_series,
                                 dual_difference_value, falling_value, format_czpol, lah, rising_to_falling,
                                 stirling_first, stirling_second)


def test_tau_basis_values():
    assert [CzpolElement.tau(3)(n) for n in range(-1, 5)] == [-6, 0, 0, 0, 6, 24]
    assert CzpolElement.tau(0)(17) == 1
    assert falling_value(5, 2) == 20


def test_combinatorial_numbers_match_sympy():
    from sympy.functions.combinatorial.numbers import stirling
    for n in range(7):
        for k in range(n + 1):
            assert stirling_second(n, k) == stirling(n, k, kind=2)
            assert stirling_first(n, k) == stirling(n, k, kind=1, signed=True)
            if k:
                assert lah(n, k) == (comb(n - 1, k - 1) * factorial(n) // factorial(k) if n else 0)


@given(czpol_elements, czpol_elements)
def test_product_agrees_pointwise(f, g):
    fg = czpol_mul(f, g)
    assert all(fg(n) == f(n) * g(n) for n in range(-20, 21))


@given(czpol_elements)
def test_polynomial_conversion_matches_sympy(f):
    p = f.to_poly()
    expected = sympy.Poly(sympy_czpol(f), X).all_coeffs()[::-1] if f else []
    got = [sympy.Rational(c.numerator, c.denominator) for c in p.coeffs]
    while got and got[-1] == 0:
        got.pop()
    assert got == [sympy.nsimplify(c) for c in expected]
    assert CzpolElement.from_poly(p) == f


@given(czpol_elements, st.integers(-6, 6))
def test_shift_evaluates_at_translated_points(f, n):
    assert all(f.shift(n)(k) == f(k + n) for k in range(-8, 9))


@given(czpol_elements, ht_elements)
def test_shift_algebra_action_is_pointwise(f, h):
    image = f.act(h)
    assert all(image(k) == sum((c * f(k + n) for n, c in h.items()), Fraction(0)) for k in range(-6, 7))


@given(czpol_elements, st.integers(0, 4))
def test_divided_difference(f, m):
    expected = lambda k: sum((-1) ** (m - j) * comb(m, j) * f(k + j) for j in range(m + 1)) / factorial(m)
    assert all(f.difference(m)(k) == expected(k) for k in range(-6, 7))


@given(czpol_elements)
def test_antipode_reflects_argument(f):
    assert all(f.antipode()(k) == f(-k) for k in range(-8, 9))


@given(czpol_elements)
def test_derivative_routes_agree(f):
    # forward log series, backward log series, and sympy differentiation
    assert f.derivative() == derivative_by_dbar_series(f)
    assert sympy_czpol(f.derivative()) == sympy.expand(sympy_czpol(f).diff(X))


def test_rising_factorials_expand_with_lah_numbers():
    for l in range(6):
        r = rising_to_falling(l)
        assert all(r(n) == sympy.rf(n, l) for n in range(-5, 6))
    assert CzpolElement.tau_bracket(-2) == CzpolElement.rising(2)
    assert CzpolElement.tau_bracket(3) == CzpolElement.tau(3)


def test_pairing_is_value_at_zero_after_acting():
    f = CzpolElement({0: 2, 2: 5})
    assert f.pairing(HtElement.one()) == 2
    assert f.pairing(HtElement.monomial(3)) == f(3)
    assert f.value_at_zero() == f(0)


def test_dual_difference_sequences():
    # coefficient of the divided difference in T^n: forward binomial for n >= 0
    for n in range(0, 6):
        for k in range(6):
            assert dual_difference_value(k, n) == falling_value(n, k)
    # backward differences for n < 0: T^-m = (1 - Dbar)^m
    for m in range(1, 6):
        for j in range(1, 6):
            assert dual_difference_value(-j, -m) == (-1) ** j * comb(m, j) * factorial(j)


def test_format_and_json():
    f = CzpolElement({0: -1, 2: Fraction(3, 2)})
    assert format_czpol(f) == "3/2·τ(2) − τ(0)"
    assert format_czpol(CzpolElement()) == "0"
    assert czpol_from_json(czpol_to_json(f)) == f


def test_derivative_normalization():
    assert CzpolElement.tau(1).derivative() == CzpolElement.tau(0)
    assert derivative_by_dbar_series(CzpolElement.tau(1)) == CzpolElement.tau(0)
