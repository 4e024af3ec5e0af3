from fractions import Fraction

import sympy
from hypothesis import settings, strategies as st

from htalgebra.hopf import HatHtElement, HtElement
from htalgebra.localization import KElement
from htalgebra.sequences import CzpolElement

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

X = sympy.Symbol("x")

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_fractions = fractions.filter(bool)

ht_elements = st.dictionaries(st.integers(-5, 5), fractions, max_size=4).map(HtElement)
hat_elements = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(0, 2)), fractions,
                               max_size=3).map(HatHtElement)
czpol_elements = st.dictionaries(st.integers(0, 5), fractions, max_size=4).map(CzpolElement)
sing_elements = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(0, 2)), fractions,
                                max_size=3).map(lambda d: KElement(sing=d))
k_elements = st.builds(lambda p, s: KElement(p) + s, czpol_elements, sing_elements)


def sympy_czpol(f: CzpolElement):
    """The sequence as a sympy polynomial in x, built from falling factorials."""
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.ff(X, l)
                            for l, c in f.terms.items()))


def sympy_k(f: KElement):
    """The element of K as a sympy rational function; sing key (n, k) is 1/(x+n)^(k+1)."""
    out = sympy_czpol(f.pol)
    for (n, k), c in f.sing.items():
        out += sympy.Rational(c.numerator, c.denominator) / (X + n) ** (k + 1)
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
