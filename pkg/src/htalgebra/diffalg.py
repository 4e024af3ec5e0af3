"""Free difference algebras and difference operators with their coefficients.

A generator is a pair (symbol, shift) standing for T^shift v_symbol.  A
monomial is a sorted tuple of generators (repetition encodes powers).
"""
from __future__ import annotations

from fractions import Fraction

from .hopf import LinearCombination, as_rational


def _monomial_shift(mono, n: int):
    return tuple(sorted((a, s + n) for a, s in mono))


def _mono_mul(a, b):
    return tuple(sorted(a + b))


class DiffPoly(LinearCombination):
    """Polynomial in the shifted generators T^n v_alpha."""

    @classmethod
    def gen(cls, symbol: str, shift: int = 0, c=1) -> "DiffPoly":
        return cls({((symbol, shift),): c})

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({(): c})

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls.const(1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                key = _mono_mul(a, b)
                out[key] = out.get(key, 0) + x * y
        return DiffPoly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        return super().__add__(other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        return super().__sub__(other)

    def __pow__(self, k: int):
        out = DiffPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def shift(self, n: int) -> "DiffPoly":
        """T^n acting as an algebra automorphism."""
        if n == 0:
            return self
        return DiffPoly({_monomial_shift(m, n): c for m, c in self.terms.items()})

    def generators(self) -> set:
        return {g for m in self.terms for g in m}

    def symbols(self) -> set:
        return {a for a, _ in self.generators()}

    def partial(self, symbol: str, shift: int) -> "DiffPoly":
        """Partial derivative with respect to T^shift v_symbol."""
        target = (symbol, shift)
        out = {}
        for mono, c in self.terms.items():
            count = mono.count(target)
            if count:
                rest = list(mono)
                rest.remove(target)
                key = tuple(rest)
                out[key] = out.get(key, 0) + c * count
        return DiffPoly(out)

    def substitute(self, symbol: str, value: "DiffPoly") -> "DiffPoly":
        """Replace v_symbol by a polynomial, transporting shifts."""
        out = DiffPoly()
        for mono, c in self.terms.items():
            term = DiffPoly.const(c)
            for a, s in mono:
                term = term * (value.shift(s) if a == symbol else DiffPoly.gen(a, s))
            out = out + term
        return out

    def evaluate(self, values, site: int) -> float:
        """Numeric value at a lattice site; ``values[symbol]`` maps a site to a number."""
        total = 0.0
        for mono, c in self.terms.items():
            w = float(c)
            for a, s in mono:
                w *= values[a](site + s)
            total += w
        return total

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def __repr__(self):
        return format_diffpoly(self)


def _format_gen(gen) -> str:
    a, s = gen
    if s == 0:
        return a
    if s == 1:
        return f"T{a}"
    return f"T^{{{s}}}{a}"


def format_diffpoly(p: DiffPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono, c in sorted(p.terms.items()):
        body = "·".join(_format_gen(g) for g in mono)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}·{body}"
        parts.append(("−" if c < 0 else "+", text))
    out = ("−" if parts[0][0] == "−" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def coinvariant_reduce(f: DiffPoly) -> "CoinvClass":
    return CoinvClass(f)


class CoinvClass:
    """Class of a polynomial modulo total differences (T - 1) V."""

    __slots__ = ("rep",)

    def __init__(self, f: DiffPoly):
        out = {}
        for mono, c in f.terms.items():
            if mono:
                low = min(s for _, s in mono)
                mono = _monomial_shift(mono, -low)
            out[mono] = out.get(mono, 0) + c
        self.rep = DiffPoly(out)

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            other = CoinvClass(other)
        if isinstance(other, (int, Fraction)):
            other = CoinvClass(DiffPoly.const(other))
        if not isinstance(other, CoinvClass):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __add__(self, other):
        return CoinvClass(self.rep + other.rep)

    def __sub__(self, other):
        return CoinvClass(self.rep - other.rep)

    def scale(self, c):
        return CoinvClass(self.rep.scale(c))

    def is_zero(self) -> bool:
        return not self.rep

    def __repr__(self):
        return f"[{self.rep!r}]"


def var_derivative(f: DiffPoly, symbol: str) -> DiffPoly:
    """Variational derivative sum_n T^-n <df/d(T^n v)>."""
    out = DiffPoly()
    for a, s in sorted(f.generators()):
        if a == symbol:
            out = out + f.partial(a, s).shift(-s)
    return out


def evol_apply(x: dict, f: DiffPoly) -> DiffPoly:
    """Evolutionary derivation with characteristic x applied to f."""
    out = DiffPoly()
    for a, s in sorted(f.generators()):
        if a in x:
            out = out + x[a].shift(s) * f.partial(a, s)
    return out


class VHtOperator:
    """Difference operator sum_n p_n T^n with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for n, p in (coeffs or {}).items():
            if isinstance(p, (int, Fraction, str)):
                p = DiffPoly.const(as_rational(p))
            if p:
                clean[int(n)] = p
        self.coeffs = clean

    @classmethod
    def identity(cls) -> "VHtOperator":
        return cls({0: DiffPoly.one()})

    @classmethod
    def shift_op(cls, n: int = 1, c=1) -> "VHtOperator":
        return cls({n: DiffPoly.const(c)})

    @classmethod
    def multiplication(cls, p: DiffPoly) -> "VHtOperator":
        return cls({0: p})

    def coeff(self, n: int) -> DiffPoly:
        return self.coeffs.get(n, DiffPoly())

    def __eq__(self, other):
        if not isinstance(other, VHtOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for n, p in other.coeffs.items():
            out[n] = out[n] + p if n in out else p
        return VHtOperator(out)

    def __neg__(self):
        return VHtOperator({n: -p for n, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "VHtOperator":
        return VHtOperator({n: p.scale(c) for n, p in self.coeffs.items()})

    def left_mul(self, p: DiffPoly) -> "VHtOperator":
        return VHtOperator({n: p * q for n, q in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, DiffPoly):
            other = VHtOperator.multiplication(other)
        if not isinstance(other, VHtOperator):
            return NotImplemented
        out = {}
        for a, p in self.coeffs.items():
            for b, q in other.coeffs.items():
                term = p * q.shift(a)
                out[a + b] = out[a + b] + term if a + b in out else term
        return VHtOperator(out)

    def __pow__(self, k: int):
        out = VHtOperator.identity()
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other: "VHtOperator") -> "VHtOperator":
        return self * other - other * self

    def apply(self, f: DiffPoly) -> DiffPoly:
        """P<f> = sum_n p_n T^n f."""
        out = DiffPoly()
        for n, p in self.coeffs.items():
            out = out + p * f.shift(n)
        return out

    def adjoint(self) -> "VHtOperator":
        """(p T^n)* = T^-n o p = (T^-n p) T^-n."""
        return VHtOperator({-n: p.shift(-n) for n, p in self.coeffs.items()})

    def antipodal(self) -> "VHtOperator":
        return VHtOperator({-n: p for n, p in self.coeffs.items()})

    def pv(self) -> DiffPoly:
        out = DiffPoly()
        for n, p in self.coeffs.items():
            out = out + p.shift(-n)
        return out

    def sp(self) -> DiffPoly:
        return self.coeff(0)

    def project(self, region: str, k: int = 0) -> "VHtOperator":
        tests = {
            ">=": lambda n: n >= k, "<=": lambda n: n <= k,
            ">": lambda n: n > k, "<": lambda n: n < k, "=": lambda n: n == k,
        }
        if region not in tests:
            raise ValueError(f"unknown projection region {region!r}")
        keep = tests[region]
        return VHtOperator({n: p for n, p in self.coeffs.items() if keep(n)})

    def shift_coeffs(self, m: int) -> "VHtOperator":
        return VHtOperator({n: p.shift(m) for n, p in self.coeffs.items()})

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        return format_operator(self)


def format_operator(op: VHtOperator) -> str:
    if not op.coeffs:
        return "0"
    parts = []
    for n in sorted(op.coeffs, reverse=True):
        p = format_diffpoly(op.coeffs[n])
        if len(op.coeffs[n].terms) > 1:
            p = f"({p})"
        if n == 0:
            parts.append(p)
        elif n == 1:
            parts.append(f"{p}·T")
        else:
            parts.append(f"{p}·T^{{{n}}}")
    return " + ".join(parts)


def vht_mul(p: VHtOperator, q: VHtOperator) -> VHtOperator:
    return p * q


def vht_adjoint(p: VHtOperator) -> VHtOperator:
    return p.adjoint()


def vht_antipodal(p: VHtOperator) -> VHtOperator:
    return p.antipodal()


def vht_pv(p: VHtOperator) -> DiffPoly:
    return p.pv()


def sp(p: VHtOperator) -> DiffPoly:
    return p.sp()


def project(p: VHtOperator, region: str, k: int = 0) -> VHtOperator:
    return p.project(region, k)


def jacobian_operator(f: DiffPoly, symbol: str) -> VHtOperator:
    """sum_n (df/d(T^n v)) T^n; its P_V image is the variational derivative."""
    return VHtOperator({s: f.partial(a, s) for a, s in f.generators() if a == symbol})
