"""The localization K of polynomial sequences at the translates of tau.

A KElement is a polynomial part plus a partial-fraction part.  The singular
part is keyed by (shift n, order k) for the function 1/(x + n)^(k+1), so the
pole sits at x = -n.  Every element is produced in canonical form.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from ._poly import Poly
from .errors import MalformedInputError, NonIntegralPoleError
from .hopf import HatHtElement, HtElement, as_rational
from .sequences import CzpolElement


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v}


def _accumulate(out: dict, key, value):
    out[key] = out.get(key, 0) + value


class KElement:
    """Element of K = polynomial sequences plus their singular complement."""

    __slots__ = ("poly", "sing")

    def __init__(self, pol=None, sing=None):
        if pol is None:
            pol = Poly()
        elif isinstance(pol, CzpolElement):
            pol = pol.to_poly()
        elif isinstance(pol, (int, Fraction)):
            pol = Poly.const(pol)
        elif not isinstance(pol, Poly):
            raise TypeError(f"unsupported polynomial part {type(pol).__name__}")
        self.poly = pol
        clean = {}
        for (n, k), c in (sing or {}).items():
            if k < 0:
                raise MalformedInputError("pole order must be nonnegative")
            c = as_rational(c)
            if c:
                _accumulate(clean, (int(n), int(k)), c)
        self.sing = _clean(clean)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "KElement":
        return cls()

    @classmethod
    def one(cls) -> "KElement":
        return cls(Poly.const(1))

    @classmethod
    def const(cls, c) -> "KElement":
        return cls(Poly.const(as_rational(c)))

    @classmethod
    def sing_basis(cls, n: int, k: int = 0, c=1) -> "KElement":
        """c / (x + n)^(k+1)."""
        return cls(sing={(n, k): c})

    @classmethod
    def pole(cls, root: int, order: int = 1, c=1) -> "KElement":
        """c / (x - root)^order."""
        return cls(sing={(-root, order - 1): c})

    @classmethod
    def tau(cls, m: int) -> "KElement":
        """tau(m) for m >= 0 and 1/tau(-m) for m < 0, so tau(-l-1) = 1/tau(l+1)."""
        if m >= 0:
            return cls(CzpolElement.tau(m))
        return inverse_tau(-m)

    @classmethod
    def from_czpol(cls, f: CzpolElement) -> "KElement":
        return cls(f)

    # views ---------------------------------------------------------------
    @property
    def pol(self) -> CzpolElement:
        return CzpolElement.from_poly(self.poly)

    def sing_part(self) -> "KElement":
        return KElement(sing=self.sing)

    def hol_part(self) -> "KElement":
        return KElement(self.poly)

    def roots(self) -> dict:
        """Pole locations with their orders."""
        out = {}
        for (n, k) in self.sing:
            out[-n] = max(out.get(-n, 0), k + 1)
        return out

    def is_polynomial(self) -> bool:
        return not self.sing

    def __bool__(self):
        return bool(self.poly) or bool(self.sing)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = KElement.const(other)
        if isinstance(other, CzpolElement):
            other = KElement(other)
        if not isinstance(other, KElement):
            return NotImplemented
        return self.poly == other.poly and self.sing == other.sing

    def __hash__(self):
        return hash((self.poly, frozenset(self.sing.items())))

    def __repr__(self):
        return format_k(self)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = _as_k(other)
        if other is None:
            return NotImplemented
        sing = dict(self.sing)
        for key, c in other.sing.items():
            _accumulate(sing, key, c)
        return KElement(self.poly + other.poly, sing)

    __radd__ = __add__

    def __neg__(self):
        return KElement(-self.poly, {k: -c for k, c in self.sing.items()})

    def __sub__(self, other):
        other = _as_k(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_k(other) - self

    def scale(self, c) -> "KElement":
        c = as_rational(c)
        return KElement(self.poly * c, {k: v * c for k, v in self.sing.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _as_k(other)
        if other is None:
            return NotImplemented
        poly = self.poly * other.poly
        sing = {}
        extra = Poly()
        for a, b in ((self, other), (other, self)):
            if not a.poly:
                continue
            for key, c in b.sing.items():
                p, s = _poly_times_pole(a.poly, key)
                extra = extra + p * c
                for k2, v in s.items():
                    _accumulate(sing, k2, v * c)
        for k1, c1 in self.sing.items():
            for k2, c2 in other.sing.items():
                for key, v in _pole_times_pole(k1, k2).items():
                    _accumulate(sing, key, v * c1 * c2)
        return KElement(poly + extra, sing)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = KElement.one()
        for _ in range(k):
            out = out * self
        return out

    # H_T and dtau actions ------------------------------------------------
    def shift(self, m: int) -> "KElement":
        """T^m F, the function x -> F(x + m)."""
        return KElement(self.poly.shift(m), {(n + m, k): c for (n, k), c in self.sing.items()})

    def derivative(self, order: int = 1) -> "KElement":
        """Divided derivative dtau^(order) F."""
        poly = self.poly
        for _ in range(order):
            poly = poly.derivative()
        poly = poly * Fraction(1, factorial(order))
        sing = {(n, k + order): c * (-1) ** order * comb(k + order, order)
                for (n, k), c in self.sing.items()}
        return KElement(poly, sing)

    def act(self, h) -> "KElement":
        """Action of h in H_T or its dtau extension."""
        h = HatHtElement.coerce(h)
        out = KElement()
        for (n, l), c in h.terms.items():
            out = out + self.derivative(l).shift(n).scale(c)
        return out

    def antipode(self) -> "KElement":
        """The function x -> F(-x)."""
        sing = {(-n, k): c * (-1) ** (k + 1) for (n, k), c in self.sing.items()}
        return KElement(self.poly.compose_neg(), sing)

    # functionals ---------------------------------------------------------
    def trace(self) -> Fraction:
        """Sum of residues."""
        return sum((c for (n, k), c in self.sing.items() if k == 0), Fraction(0))

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        total = self.poly(x)
        for (n, k), c in self.sing.items():
            if x + n == 0:
                raise ZeroDivisionError(f"evaluation at the pole {x}")
            total += c / (x + n) ** (k + 1)
        return total

    __call__ = evaluate

    def to_rational_form(self) -> "RationalForm":
        roots = self.roots()
        denom = Poly.from_roots([r for r, d in roots.items() for _ in range(d)])
        num = self.poly * denom
        for (n, k), c in self.sing.items():
            r = -n
            rest = dict(roots)
            rest[r] -= k + 1
            cof = Poly.from_roots([s for s, d in rest.items() for _ in range(d)])
            num = num + cof * c
        return RationalForm(num, roots)


def _as_k(value):
    if isinstance(value, KElement):
        return value
    if isinstance(value, CzpolElement):
        return KElement(value)
    if isinstance(value, (int, Fraction)):
        return KElement.const(value)
    return None


def _poly_times_pole(p: Poly, key):
    """Split p(x)/(x + n)^(k+1) into polynomial and principal parts."""
    n, k = key
    r = -n
    shifted = p.shift(r).coeffs
    sing = {}
    for j, a in enumerate(shifted[:k + 1]):
        if a:
            sing[(n, k - j)] = a
    high = Poly(shifted[k + 1:]).shift(-r) if len(shifted) > k + 1 else Poly()
    return high, sing


@lru_cache(maxsize=None)
def _pole_times_pole(key1, key2) -> dict:
    (n1, k1), (n2, k2) = key1, key2
    if n1 == n2:
        return {(n1, k1 + k2 + 1): Fraction(1)}
    out = {}
    for (na, a), (nb, b) in (((n1, k1 + 1), (n2, k2 + 1)), ((n2, k2 + 1), (n1, k1 + 1))):
        r, s = -na, -nb
        for j in range(a):
            out[(na, a - j - 1)] = out.get((na, a - j - 1), 0) + Fraction(
                comb(b + j - 1, j) * (-1) ** j, (r - s) ** (b + j))
    return out


@lru_cache(maxsize=None)
def inverse_tau(m: int) -> KElement:
    """1/tau(m) = 1/(x(x-1)...(x-m+1)) in partial fractions."""
    if m < 1:
        raise ValueError("1/tau(m) needs m >= 1")
    sing = {}
    for j in range(m):
        sing[(-j, 0)] = Fraction((-1) ** (m - 1 - j), factorial(j) * factorial(m - 1 - j))
    return KElement(sing=sing)


class RationalForm:
    """Numerator polynomial over a product of (x - root)^multiplicity."""

    def __init__(self, numerator, denominator):
        if isinstance(numerator, CzpolElement):
            numerator = numerator.to_poly()
        elif isinstance(numerator, (int, Fraction)):
            numerator = Poly.const(numerator)
        self.numerator = numerator
        roots = {}
        items = denominator.items() if isinstance(denominator, dict) else denominator
        for root, mult in items:
            if Fraction(root).denominator != 1:
                raise NonIntegralPoleError(f"pole at non-integer {root}")
            if mult < 1:
                raise MalformedInputError(f"multiplicity {mult} at root {root} must be >= 1")
            roots[int(root)] = roots.get(int(root), 0) + int(mult)
        self.roots = roots

    def denominator_poly(self) -> Poly:
        return Poly.from_roots([r for r, d in self.roots.items() for _ in range(d)])

    def reduced(self) -> "RationalForm":
        """Cancel common roots of numerator and denominator."""
        num = self.numerator
        roots = dict(self.roots)
        for r in list(roots):
            while roots[r] and num and num(r) == 0:
                num, _ = num.divmod(Poly((-r, 1)))
                roots[r] -= 1
        return RationalForm(num, {r: d for r, d in roots.items() if d})

    def evaluate(self, x) -> Fraction:
        return self.numerator(x) / self.denominator_poly()(x)

    def __mul__(self, other: "RationalForm") -> "RationalForm":
        roots = dict(self.roots)
        for r, d in other.roots.items():
            roots[r] = roots.get(r, 0) + d
        return RationalForm(self.numerator * other.numerator, roots)


def k_normalize(form: RationalForm) -> KElement:
    """Division followed by partial fractions at each integer root."""
    denom = form.denominator_poly()
    quotient, _ = form.numerator.divmod(denom)
    sing = {}
    for r, d in form.roots.items():
        rest = Poly.from_roots([s for s, e in form.roots.items() if s != r for _ in range(e)])
        num_t = form.numerator.taylor(r, d)
        den_t = rest.taylor(r, d)
        series = []
        for j in range(d):
            acc = num_t[j] - sum(series[i] * den_t[j - i] for i in range(j))
            series.append(acc / den_t[0])
        for j, g in enumerate(series):
            if g:
                sing[(-r, d - j - 1)] = g
    return KElement(quotient, sing)


def k_mul(a: KElement, b: KElement) -> KElement:
    return a * b


def k_add(a: KElement, b: KElement) -> KElement:
    return a + b


def hat_ht_act_k(h, f: KElement) -> KElement:
    return f.act(h)


def trace(f) -> Fraction:
    return _as_k(f).trace()


def value_at_zero(f: CzpolElement) -> Fraction:
    """f(0), computed as the trace of f/tau."""
    return (KElement(f) * KElement.sing_basis(0)).trace()


def k_expand(f: KElement, bound: int) -> dict:
    """Components F_n = Tr(F tau(n)) for |n| <= bound."""
    return {n: (f * KElement.tau(n)).trace() for n in range(-bound, bound + 1)}


def sing_part(f: KElement) -> KElement:
    return f.sing_part()


def hol_part(f: KElement) -> KElement:
    return f.hol_part()


# singular functions as a free module over the extended shift algebra -------

def alpha(h) -> KElement:
    """alpha(h) = S(h)(1/tau); T^n dtau^(l) goes to 1/(x - n)^(l+1)."""
    h = HatHtElement.coerce(h)
    return KElement(sing={(-n, l): c for (n, l), c in h.terms.items()})


def alpha_inverse(f: KElement) -> HatHtElement:
    """Inverse of alpha on the singular part of f."""
    return HatHtElement({(-n, k): c for (n, k), c in f.sing.items()})


def convolve(g: KElement, m: KElement) -> KElement:
    """Pole-adding product of singular parts: 1/(x-a) with 1/(x-b) gives 1/(x-a-b).

    Equals S(alpha^-1(g)) applied to m, and is commutative.
    """
    out = {}
    for (s, k), c in g.sing.items():
        for (n, j), d in m.sing.items():
            _accumulate(out, (n + s, j + k), c * d * comb(j + k, k))
    return KElement(sing=out)


def taylor_functionals(kappa: KElement):
    """Write sing(P kappa) = sum_b Tr(P lambda_b) beta_b for polynomial P.

    Returns a list of (lambda_b, beta_b) pairs of singular basis keys with
    a coefficient; lambda_b reads off a Taylor coefficient of P at a pole.
    """
    out = []
    for (n, k), c in kappa.sing.items():
        for i in range(k + 1):
            out.append(((n, i), (n, k - i), c))
    return out


# hat-K -----------------------------------------------------------------------

def _e_coeffs(h: HatHtElement) -> dict:
    return h.to_e_basis()


class HatKElement:
    """Singular part plus a formal table over the dual basis e*_{n,k}."""

    __slots__ = ("hol", "sing")

    def __init__(self, hol=None, sing=None):
        self.hol = _clean({(int(n), int(k)): as_rational(c) for (n, k), c in (hol or {}).items()})
        if isinstance(sing, KElement):
            sing = sing.sing
        self.sing = _clean({k: as_rational(c) for k, c in (sing or {}).items()})

    @classmethod
    def dual_basis(cls, n: int, k: int, c=1) -> "HatKElement":
        return cls({(n, k): c})

    @classmethod
    def from_czpol(cls, f: CzpolElement) -> "HatKElement":
        """Coefficient at e*_{n,l} is (Delta[n] dtau^(l) f)(0)."""
        d = max(f.degree, 0)
        hol = {}
        for n in range(-d, d + 1):
            for l in range(d + 1):
                v = f.pairing(HatHtElement.e_basis(n, l))
                if v:
                    hol[(n, l)] = v
        return cls(hol)

    @classmethod
    def from_k(cls, f: KElement) -> "HatKElement":
        out = cls.from_czpol(f.pol)
        return cls(out.hol, f.sing)

    def __eq__(self, other):
        if not isinstance(other, HatKElement):
            return NotImplemented
        return self.hol == other.hol and self.sing == other.sing

    def __hash__(self):
        return hash((frozenset(self.hol.items()), frozenset(self.sing.items())))

    def __add__(self, other):
        hol = dict(self.hol)
        for k, c in other.hol.items():
            _accumulate(hol, k, c)
        sing = dict(self.sing)
        for k, c in other.sing.items():
            _accumulate(sing, k, c)
        return HatKElement(hol, sing)

    def scale(self, c):
        c = as_rational(c)
        return HatKElement({k: v * c for k, v in self.hol.items()},
                           {k: v * c for k, v in self.sing.items()})

    def __repr__(self):
        hol = " + ".join(f"{c}*e*({n},{k})" for (n, k), c in sorted(self.hol.items()))
        sing = format_k(KElement(sing=self.sing))
        return f"HatK(hol: {hol or '0'}; sing: {sing})"

    def pairing(self, h) -> Fraction:
        """<f, h> for h in the extended shift algebra (singular part ignored)."""
        coeffs = _e_coeffs(HatHtElement.coerce(h))
        return sum((c * coeffs.get(key, 0) for key, c in self.hol.items()), Fraction(0))

    def act_on_ht(self, h) -> HatHtElement:
        """f.h = sum h' <f, h''> over the coproduct of h."""
        h = HatHtElement.coerce(h)
        out = HatHtElement()
        for ((n, a), (_, b)), c in h.coproduct().items():
            w = self.pairing(HatHtElement.monomial(n, b))
            if w:
                out = out + HatHtElement.monomial(n, a, c * w)
        return out

    def act_on_sing(self, f: KElement) -> KElement:
        """Action on singular functions transported through alpha."""
        return alpha(self.act_on_ht(alpha_inverse(f)))

    def hol_product(self, other: "HatKElement") -> "HatKElement":
        """Product of the formal parts, with structure constants from the coproduct."""
        out = {}
        for (n1, k1), a in self.hol.items():
            for (n2, k2), b in other.hol.items():
                for key, v in dual_product(n1, k1, n2, k2).items():
                    _accumulate(out, key, a * b * v)
        return HatKElement(out)

    def trace(self) -> Fraction:
        return KElement(sing=self.sing).trace()


@lru_cache(maxsize=None)
def dual_product(n1: int, k1: int, n2: int, k2: int) -> dict:
    """Coefficients of e*_c in e*_(n1,k1) e*_(n2,k2).

    The coefficient of e*_c equals the coefficient of e_(n1,k1) (x) e_(n2,k2)
    in the coproduct of e_c.  The search window is finite since the dual
    basis functions of fixed index have bounded degree.
    """
    bound = abs(n1) + abs(n2)
    out = {}
    for n in range(-bound, bound + 1):
        for k in range(k1 + k2 + 1):
            cop = HatHtElement.e_basis(n, k).coproduct()
            total = Fraction(0)
            for ((m, a), (_, b)), c in cop.items():
                if a != k1 or b != k2:
                    continue
                left = HtElement.monomial(m).to_delta_basis().get(n1, 0)
                right = HtElement.monomial(m).to_delta_basis().get(n2, 0)
                total += c * left * right
            if total:
                out[(n, k)] = total
    return out


def format_k(f: KElement) -> str:
    parts = []
    if f.poly:
        parts.append(repr(f.pol))
    for (n, k), c in sorted(f.sing.items()):
        if n == 0:
            base = "x"
        elif n > 0:
            base = f"(x+{n})"
        else:
            base = f"(x-{-n})"
        power = "" if k == 0 else f"^{k + 1}"
        parts.append(f"{c}/{base}{power}")
    return " + ".join(parts) if parts else "0"


def k_to_json(f: KElement) -> dict:
    return {
        "pol": {"tau": {str(l): str(c) for l, c in f.pol.items()}},
        "sing": [{"shift": n, "order": k, "coeff": str(c)} for (n, k), c in sorted(f.sing.items())],
    }


def k_from_json(obj) -> KElement:
    pol = CzpolElement({int(l): as_rational(c) for l, c in obj.get("pol", {}).get("tau", {}).items()})
    sing = {(int(e["shift"]), int(e["order"])): as_rational(e["coeff"]) for e in obj.get("sing", [])}
    return KElement(pol, sing)
