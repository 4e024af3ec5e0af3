"""The shift Hopf algebra H_T = Q[T, T^-1] and its extension by d/dtau.

Elements are stored in the monomial basis T^n.  The difference basis
Delta[m] = Delta^m/m! (m >= 0), Delta[-k] = Dbar^k/k! is a view obtained by
conversion.  Elements of the extension carry divided powers dtau^(l) of the
derivation, which commutes with T.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


def falling(n: int, k: int) -> int:
    """Falling factorial n(n-1)...(n-k+1); equals 1 for k = 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class LinearCombination:
    """Finite formal sum of hashable basis keys with rational coefficients.

    Subclasses supply multiplication and printing.  Instances are treated as
    immutable values.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, value in (terms or {}).items():
            value = as_rational(value)
            if value:
                clean[key] = clean.get(key, 0) + value
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    def _new(self, terms):
        return type(self)(terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, type(self)):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = as_rational(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def items(self):
        return sorted(self.terms.items())


class HtElement(LinearCombination):
    """Laurent polynomial sum c_n T^n."""

    @classmethod
    def monomial(cls, n: int = 1, c=1) -> "HtElement":
        return cls({n: c})

    @classmethod
    def one(cls) -> "HtElement":
        return cls({0: 1})

    @classmethod
    def delta(cls) -> "HtElement":
        """Forward difference T - 1."""
        return cls({1: 1, 0: -1})

    @classmethod
    def dbar(cls) -> "HtElement":
        """Backward difference 1 - T^-1."""
        return cls({0: 1, -1: -1})

    @classmethod
    def delta_basis(cls, m: int) -> "HtElement":
        """Delta[m] = Delta^m/m! for m >= 0 and Dbar^k/k! for m = -k < 0."""
        return _delta_basis(m)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, HtElement):
            return NotImplemented
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return HtElement(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible in H_T")
            (n, c), = self.terms.items()
            return HtElement({-n * (-k): Fraction(1) / c ** (-k)})
        out = HtElement.one()
        for _ in range(k):
            out = out * self
        return out

    def antipode(self) -> "HtElement":
        return HtElement({-n: c for n, c in self.terms.items()})

    def counit(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def coproduct(self, twisted: bool = False) -> "TensorHt":
        sign = -1 if twisted else 1
        return TensorHt({(n, sign * n): c for n, c in self.terms.items()})

    def to_delta_basis(self) -> dict:
        """Coefficients in the difference basis, as a map m -> rational."""
        out = {}
        for n, c in self.terms.items():
            for m, d in _monomial_in_delta_basis(n).items():
                out[m] = out.get(m, 0) + c * d
        return {m: v for m, v in out.items() if v}

    @classmethod
    def from_delta_basis(cls, coeffs: dict) -> "HtElement":
        out = cls()
        for m, c in coeffs.items():
            out = out + _delta_basis(m).scale(c)
        return out

    def to_hat(self) -> "HatHtElement":
        return HatHtElement({(n, 0): c for n, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*T^{n}" for n, c in self.items())


@lru_cache(maxsize=None)
def _delta_basis(m: int) -> HtElement:
    base = HtElement.delta() if m >= 0 else HtElement.dbar()
    k = abs(m)
    return (base ** k).scale(Fraction(1, factorial(k)))


@lru_cache(maxsize=None)
def _monomial_in_delta_basis(n: int) -> dict:
    if n >= 0:
        return {k: Fraction(falling(n, k)) for k in range(n + 1)}
    m = -n
    return {-k: Fraction((-1) ** k * falling(m, k)) for k in range(m + 1)}


class TensorHt(LinearCombination):
    """Element of a tensor power of H_T; keys are tuples of exponents."""

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TensorHt):
            return NotImplemented
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                key = tuple(i + j for i, j in zip(a, b))
                out[key] = out.get(key, 0) + x * y
        return TensorHt(out)

    def map_factor(self, index: int, fn) -> "TensorHt":
        """Apply a linear map HtElement -> HtElement to one tensor factor."""
        out = {}
        for key, c in self.terms.items():
            image = fn(HtElement.monomial(key[index]))
            for n, d in image.terms.items():
                new = key[:index] + (n,) + key[index + 1:]
                out[new] = out.get(new, 0) + c * d
        return TensorHt(out)

    def expand_factor(self, index: int) -> "TensorHt":
        """Apply the coproduct to one factor, raising the tensor rank by one."""
        out = {}
        for key, c in self.terms.items():
            new = key[:index] + (key[index],) + key[index:]
            out[new] = out.get(new, 0) + c
        return TensorHt(out)

    def contract(self) -> HtElement:
        """Multiplication map applied to all factors."""
        out = {}
        for key, c in self.terms.items():
            n = sum(key)
            out[n] = out.get(n, 0) + c
        return HtElement(out)

    def counit_factor(self, index: int) -> "TensorHt":
        out = {}
        for key, c in self.terms.items():
            new = key[:index] + key[index + 1:]
            out[new] = out.get(new, 0) + c
        return TensorHt(out)

    def to_delta_basis(self) -> dict:
        """Coefficients over tensor products of difference-basis elements."""
        out = {}
        for key, c in self.terms.items():
            parts = [_monomial_in_delta_basis(n) for n in key]
            for combo, d in _product_terms(parts):
                out[combo] = out.get(combo, 0) + c * d
        return {k: v for k, v in out.items() if v}

    def __repr__(self):
        return " + ".join(f"{c}*T^{k}" for k, c in self.items()) or "0"


def _product_terms(parts):
    if not parts:
        yield (), Fraction(1)
        return
    for head, c in parts[0].items():
        for tail, d in _product_terms(parts[1:]):
            yield (head,) + tail, c * d


class HatHtElement(LinearCombination):
    """Sum c T^n dtau^(l) with divided powers dtau^(l) = dtau^l / l!."""

    @classmethod
    def monomial(cls, n: int = 0, l: int = 0, c=1) -> "HatHtElement":
        if l < 0:
            raise ValueError("divided power index must be nonnegative")
        return cls({(n, l): c})

    @classmethod
    def one(cls) -> "HatHtElement":
        return cls({(0, 0): 1})

    @classmethod
    def dtau(cls, l: int = 1) -> "HatHtElement":
        return cls.monomial(0, l)

    @classmethod
    def coerce(cls, h) -> "HatHtElement":
        if isinstance(h, HatHtElement):
            return h
        if isinstance(h, HtElement):
            return h.to_hat()
        raise TypeError(f"expected an H_T or extended element, got {type(h).__name__}")

    @classmethod
    def e_basis(cls, k: int, l: int) -> "HatHtElement":
        """e_{k,l} = Delta[k] dtau^(l)."""
        return cls({(n, l): c for n, c in _delta_basis(k).terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, HtElement):
            other = other.to_hat()
        if not isinstance(other, HatHtElement):
            return NotImplemented
        out = {}
        for (a, i), x in self.terms.items():
            for (b, j), y in other.terms.items():
                key = (a + b, i + j)
                out[key] = out.get(key, 0) + x * y * comb(i + j, i)
        return HatHtElement(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, HtElement):
            return other.to_hat() * self
        return NotImplemented

    def __pow__(self, k: int):
        out = HatHtElement.one()
        for _ in range(k):
            out = out * self
        return out

    def antipode(self) -> "HatHtElement":
        return HatHtElement({(-n, l): c * (-1) ** l for (n, l), c in self.terms.items()})

    def counit(self) -> Fraction:
        return sum((c for (n, l), c in self.terms.items() if l == 0), Fraction(0))

    def coproduct(self) -> dict:
        """Coproduct as a map ((n, a), (n, b)) -> coefficient."""
        out = {}
        for (n, l), c in self.terms.items():
            for a in range(l + 1):
                key = ((n, a), (n, l - a))
                out[key] = out.get(key, 0) + c
        return out

    def to_e_basis(self) -> dict:
        """Coefficients over e_{k,l} = Delta[k] dtau^(l)."""
        out = {}
        for (n, l), c in self.terms.items():
            for k, d in _monomial_in_delta_basis(n).items():
                out[(k, l)] = out.get((k, l), 0) + c * d
        return {k: v for k, v in out.items() if v}

    def t_part(self, l: int = 0) -> HtElement:
        """The H_T coefficient of dtau^(l)."""
        return HtElement({n: c for (n, j), c in self.terms.items() if j == l})

    def max_order(self) -> int:
        return max((l for _, l in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*T^{n}*dtau^({l})" for (n, l), c in self.items())


def check_hopf_axioms(h: HtElement) -> bool:
    """Antipode, counit and coassociativity identities for one element."""
    cop = h.coproduct()
    antipode_ok = cop.map_factor(0, HtElement.antipode).contract() == HtElement.one().scale(h.counit())
    counit_ok = HtElement({k[0]: c for k, c in cop.counit_factor(0).terms.items()}) == h
    coassoc_ok = cop.expand_factor(0) == cop.expand_factor(1)
    return antipode_ok and counit_ok and coassoc_ok


# JSON ------------------------------------------------------------------------

def _rational_str(c: Fraction) -> str:
    return str(Fraction(c))


def ht_to_json(h) -> dict:
    """{"T": {"n": "p/q"}, "dtau": {"l": {"n": "p/q"}}}; "dtau" marks the extended algebra."""
    if isinstance(h, HtElement):
        return {"T": {str(n): _rational_str(c) for n, c in h.items()}}
    out = {"T": {}, "dtau": {}}
    for (n, l), c in h.items():
        if l == 0:
            out["T"][str(n)] = _rational_str(c)
        else:
            out["dtau"].setdefault(str(l), {})[str(n)] = _rational_str(c)
    return out


def ht_from_json(obj):
    """Inverse of ht_to_json; returns an extended element when "dtau" is present."""
    if not isinstance(obj, dict) or not set(obj) <= {"T", "dtau"}:
        raise ValueError(f"expected an object with keys 'T' and 'dtau': {obj!r}")
    base = {int(n): as_rational(c) for n, c in obj.get("T", {}).items()}
    if "dtau" not in obj:
        return HtElement(base)
    terms = {(n, 0): c for n, c in base.items()}
    for l, row in obj["dtau"].items():
        if int(l) < 0:
            raise ValueError("divided power index must be nonnegative")
        for n, c in row.items():
            terms[(int(n), int(l))] = as_rational(c)
    return HatHtElement(terms)
