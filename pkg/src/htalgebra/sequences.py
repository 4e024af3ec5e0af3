"""Polynomial sequences on Z in the falling-factorial basis tau(l).

tau(l) is the sequence n -> n(n-1)...(n-l+1).  The shift acts by
(T f)(n) = f(n + 1), so Delta tau(l) = l tau(l-1).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from ._poly import Poly
from .hopf import HatHtElement, HtElement, LinearCombination, as_rational, falling


@lru_cache(maxsize=None)
def stirling_first(n: int, k: int) -> int:
    """Signed Stirling numbers: (x)_n = sum_k s(n, k) x^k."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling_first(n - 1, k - 1) - (n - 1) * stirling_first(n - 1, k)


@lru_cache(maxsize=None)
def stirling_second(n: int, k: int) -> int:
    """x^n = sum_k S(n, k) (x)_k."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling_second(n - 1, k) + stirling_second(n - 1, k - 1)


def lah(n: int, k: int) -> int:
    """Unsigned Lah numbers: rising factorial of length n in falling factorials."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return comb(n - 1, k - 1) * factorial(n) // factorial(k)


@lru_cache(maxsize=None)
def _basis_product(l: int, m: int) -> dict:
    out = {}
    for k in range(min(l, m) + 1):
        out[l + m - k] = Fraction(comb(l, k) * falling(m, k))
    return out


@lru_cache(maxsize=None)
def _shift_basis(n: int, l: int) -> dict:
    return {l - k: Fraction(falling(n, k) * comb(l, k)) for k in range(l + 1) if falling(n, k)}


@lru_cache(maxsize=None)
def _derivative_basis(l: int) -> dict:
    # d/dx = log(1 + Delta) = sum_k (-1)^(k+1) Delta^k / k, and Delta^k tau(l) = k! C(l,k) tau(l-k)
    return {l - k: Fraction((-1) ** (k + 1) * factorial(k - 1) * comb(l, k)) for k in range(1, l + 1)}


class CzpolElement(LinearCombination):
    """Finite sum c_l tau(l)."""

    @classmethod
    def tau(cls, l: int = 1, c=1) -> "CzpolElement":
        if l < 0:
            raise ValueError("tau(l) is a polynomial sequence only for l >= 0")
        return cls({l: c})

    @classmethod
    def one(cls) -> "CzpolElement":
        return cls({0: 1})

    @classmethod
    def const(cls, c) -> "CzpolElement":
        return cls({0: c})

    @classmethod
    def rising(cls, l: int) -> "CzpolElement":
        """taubar(l): n -> n(n+1)...(n+l-1), expanded in the tau basis."""
        return rising_to_falling(l)

    @classmethod
    def tau_bracket(cls, m: int) -> "CzpolElement":
        """tau[m] = tau(m) for m >= 0 and taubar(-m) for m < 0."""
        return cls.tau(m) if m >= 0 else rising_to_falling(-m)

    @classmethod
    def from_poly(cls, p: Poly) -> "CzpolElement":
        out = {}
        for j, c in enumerate(p.coeffs):
            if c:
                for l in range(j + 1):
                    s = stirling_second(j, l)
                    if s:
                        out[l] = out.get(l, 0) + c * s
        return cls(out)

    def to_poly(self) -> Poly:
        deg = max(self.terms, default=-1)
        cs = [Fraction(0)] * (deg + 1)
        for l, c in self.terms.items():
            for j in range(l + 1):
                cs[j] += c * stirling_first(l, j)
        return Poly(cs)

    @property
    def degree(self) -> int:
        return max(self.terms, default=-1)

    def __call__(self, n) -> Fraction:
        return sum((c * falling_value(n, l) for l, c in self.terms.items()), Fraction(0))

    evaluate = __call__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, CzpolElement):
            return NotImplemented
        out = {}
        for l, a in self.terms.items():
            for m, b in other.terms.items():
                for k, d in _basis_product(l, m).items():
                    out[k] = out.get(k, 0) + a * b * d
        return CzpolElement(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = CzpolElement.one()
        for _ in range(k):
            out = out * self
        return out

    def shift(self, n: int) -> "CzpolElement":
        """T^n f, i.e. the sequence k -> f(k + n)."""
        out = {}
        for l, c in self.terms.items():
            for k, d in _shift_basis(n, l).items():
                out[k] = out.get(k, 0) + c * d
        return CzpolElement(out)

    def difference(self, m: int = 1) -> "CzpolElement":
        """Delta[m] f for m >= 0 (divided forward differences)."""
        return CzpolElement({l - m: c * comb(l, m) for l, c in self.terms.items() if l >= m})

    def derivative(self) -> "CzpolElement":
        """dtau f, computed from the finite series log(1 + Delta)."""
        out = {}
        for l, c in self.terms.items():
            for k, d in _derivative_basis(l).items():
                out[k] = out.get(k, 0) + c * d
        return CzpolElement(out)

    def act(self, h) -> "CzpolElement":
        """Action of an element of H_T or of its extension by dtau."""
        h = HatHtElement.coerce(h)
        out = CzpolElement()
        for (n, l), c in h.terms.items():
            f = self
            for _ in range(l):
                f = f.derivative()
            out = out + f.shift(n).scale(c / factorial(l))
        return out

    def antipode(self) -> "CzpolElement":
        """The sequence n -> f(-n)."""
        return CzpolElement.from_poly(self.to_poly().compose_neg())

    def pairing(self, h) -> Fraction:
        """<h, f> = (h f)(0)."""
        return self.act(h)(0)

    def value_at_zero(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    def __repr__(self):
        return format_czpol(self)


def falling_value(n, l: int) -> Fraction:
    out = Fraction(1)
    for i in range(l):
        out *= n - i
    return out


@lru_cache(maxsize=None)
def rising_to_falling(l: int) -> CzpolElement:
    if l < 0:
        raise ValueError("rising factorial length must be nonnegative")
    return CzpolElement({k: lah(l, k) for k in range(l + 1)})


def tau_eval(f: CzpolElement, n: int) -> Fraction:
    return f(n)


def czpol_mul(f: CzpolElement, g: CzpolElement) -> CzpolElement:
    return f * g


def ht_act_seq(h, f: CzpolElement) -> CzpolElement:
    return f.act(h)


def seq_antipode(f: CzpolElement) -> CzpolElement:
    return f.antipode()


def pairing(h, f: CzpolElement) -> Fraction:
    return f.pairing(h)


def dual_difference_value(k: int, n: int) -> Fraction:
    """Value at n of the dual difference sequence Delta*[k].

    Delta*[k](n) is the coefficient of Delta[k] in T^n.
    """
    return HtElement.monomial(n).to_delta_basis().get(k, Fraction(0))


def derivative_by_dbar_series(f: CzpolElement) -> CzpolElement:
    """dtau f via the backward series sum_k Dbar^k / k; used as a cross-check."""
    out = CzpolElement()
    term = f
    k = 1
    while True:
        term = term.act(HtElement.dbar())
        if not term:
            return out
        out = out + term.scale(Fraction(1, k))
        k += 1


def format_czpol(f: CzpolElement) -> str:
    if not f.terms:
        return "0"
    text = ""
    for l, c in sorted(f.terms.items(), reverse=True):
        mag = abs(c)
        body = f"τ({l})" if mag == 1 else f"{mag}·τ({l})"
        if not text:
            text = ("−" if c < 0 else "") + body
        else:
            text += (" − " if c < 0 else " + ") + body
    return text


def czpol_from_json(obj) -> CzpolElement:
    return CzpolElement({int(k): as_rational(v) for k, v in obj["tau"].items()})


def czpol_to_json(f: CzpolElement) -> dict:
    return {"tau": {str(l): str(c) for l, c in f.items()}}
