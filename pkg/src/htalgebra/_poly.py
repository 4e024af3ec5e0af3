"""Dense univariate polynomials in x with exact rational coefficients.

Used as the monomial view of polynomial sequences and as the numerator
arithmetic behind partial fractions.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, gcd


class Poly:
    """Polynomial with coefficients ``coeffs[i]`` of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        """Product of (x - r) over ``roots`` (with repetition)."""
        out = cls.const(1)
        for r in roots:
            out = out * cls((-Fraction(r), 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(), Poly(rem)
        quot = [Fraction(0)] * dq
        for i in range(dq - 1, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quot), Poly(rem)

    def shift(self, r) -> "Poly":
        """Return the polynomial x -> p(x + r)."""
        r = Fraction(r)
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c:
                for j in range(i + 1):
                    out[j] += c * comb(i, j) * r ** (i - j)
        return Poly(out)

    def taylor(self, r, order: int):
        """First ``order`` Taylor coefficients of p at x = r."""
        cs = self.shift(r).coeffs
        return [cs[j] if j < len(cs) else Fraction(0) for j in range(order)]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_neg(self) -> "Poly":
        """Return x -> p(-x)."""
        return Poly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))


def _as_poly(p) -> Poly:
    if isinstance(p, Poly):
        return p
    return Poly.const(p)


def integer_roots(p: Poly) -> dict:
    """Integer roots of p with multiplicities."""
    roots = {}
    rest = p
    while rest.degree > 0 and rest.coeffs[0] == 0:
        rest, _ = rest.divmod(Poly((0, 1)))
        roots[0] = roots.get(0, 0) + 1
    if rest.degree <= 0:
        return roots
    scale = 1
    for c in rest.coeffs:
        scale = scale * c.denominator // gcd(scale, c.denominator)
    const = abs(int(rest.coeffs[0] * scale))
    # an integer root divides the constant term of the integral rescaling
    for q in range(1, const + 1):
        if const % q:
            continue
        for r in (q, -q):
            while rest.degree > 0 and rest(r) == 0:
                rest, _ = rest.divmod(Poly((-r, 1)))
                roots[r] = roots.get(r, 0) + 1
    return roots
