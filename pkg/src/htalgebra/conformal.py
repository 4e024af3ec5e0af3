"""Conformal algebras over the shift Hopf algebra, given by structure-constant tables.

A table entry (a, b, n) -> sum c T^q g_c gives the n-th product (g_a)_n g_b.
Products of shifted generators follow from covariance:
(T^p g_a)_n (T^q g_b) = T^q <(g_a)_{n+p-q} g_b>.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import product

from .diffalg import DiffPoly, VHtOperator
from .errors import MalformedInputError, UndefinedProductError
from .hopf import HtElement, LinearCombination, as_rational
from .localization import KElement


class FreeHtModuleElement(LinearCombination):
    """sum c T^n g_alpha, keyed by (alpha, n)."""

    @classmethod
    def gen(cls, symbol: str, shift: int = 0, c=1) -> "FreeHtModuleElement":
        return cls({(symbol, shift): c})

    def shift(self, m: int) -> "FreeHtModuleElement":
        return FreeHtModuleElement({(a, n + m): c for (a, n), c in self.terms.items()})

    def act(self, h) -> "FreeHtModuleElement":
        """Action of h in H_T."""
        if isinstance(h, int):
            return self.shift(h)
        out = FreeHtModuleElement()
        for m, c in h.terms.items():
            out = out + self.shift(m).scale(c)
        return out

    def forget_shifts(self) -> dict:
        out = {}
        for (a, _), c in self.terms.items():
            out[a] = out.get(a, 0) + c
        return {a: c for a, c in out.items() if c}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, n), c in self.items():
            body = a if n == 0 else (f"T{a}" if n == 1 else f"T^{{{n}}}{a}")
            parts.append(body if c == 1 else f"{c}·{body}")
        return " + ".join(parts)


def _elem(obj) -> FreeHtModuleElement:
    if isinstance(obj, FreeHtModuleElement):
        return obj
    if isinstance(obj, str):
        return FreeHtModuleElement.gen(obj)
    if isinstance(obj, tuple):
        return FreeHtModuleElement.gen(*obj)
    raise TypeError(f"cannot read {obj!r} as a module element")


class ConformalAlgebra:
    """Free H_T-module on ``generators`` with products from a finite table."""

    def __init__(self, generators, table, name: str = ""):
        self.generators = tuple(generators)
        self.name = name
        clean = {}
        for (a, b, n), value in table.items():
            if a not in self.generators or b not in self.generators:
                raise MalformedInputError(f"table entry uses an unknown generator: {(a, b, n)}")
            value = _elem(value) if not isinstance(value, FreeHtModuleElement) else value
            for (c, _), _v in value.terms.items():
                if c not in self.generators:
                    raise MalformedInputError(f"table value uses an unknown generator {c!r}")
            if value:
                clean[(a, b, int(n))] = value
        self.table = clean

    def entry(self, a: str, b: str, n: int) -> FreeHtModuleElement:
        if a not in self.generators or b not in self.generators:
            raise UndefinedProductError(f"no product defined for ({a}, {b})")
        return self.table.get((a, b, n), FreeHtModuleElement())

    def support(self, a: str, b: str) -> list:
        return sorted(n for (x, y, n) in self.table if (x, y) == (a, b))

    def product(self, x, n: int, y) -> FreeHtModuleElement:
        return conf_product(self, x, n, y)

    def nonzero_indices(self, x, y) -> list:
        """Indices n with x_n y possibly nonzero."""
        x, y = _elem(x), _elem(y)
        out = set()
        for (a, p), _ in x.terms.items():
            for (b, q), _ in y.terms.items():
                out.update(m - p + q for m in self.support(a, b))
        return sorted(out)

    def __repr__(self):
        return f"ConformalAlgebra({self.name or ','.join(self.generators)})"


def conf_product(alg: ConformalAlgebra, x, n: int, y) -> FreeHtModuleElement:
    """x_n y by bilinearity and covariance."""
    x, y = _elem(x), _elem(y)
    out = FreeHtModuleElement()
    for (a, p), c in x.terms.items():
        for (b, q), d in y.terms.items():
            value = alg.entry(a, b, n + p - q)
            if value:
                out = out + value.shift(q).scale(c * d)
    return out


# standard algebras ----------------------------------------------------------------

def ctoda() -> ConformalAlgebra:
    """Toda conformal algebra on B, C with C_0 B = C (the skew-consistent reading)."""
    e = FreeHtModuleElement.gen
    table = {
        ("B", "C", 0): e("C", 0, -1),
        ("B", "C", -1): e("C"),
        ("C", "B", 0): e("C"),
        ("C", "B", 1): e("C", 1, -1),
    }
    return ConformalAlgebra(("B", "C"), table, "ctoda")


def ctoda_typo() -> ConformalAlgebra:
    """The Toda table with the extra entry C_0 C = C, which breaks skew-symmetry."""
    alg = ctoda()
    table = dict(alg.table)
    table[("C", "C", 0)] = FreeHtModuleElement.gen("C")
    return ConformalAlgebra(("B", "C"), table, "ctoda-typo")


def current_algebra(generators, bracket, name: str = "") -> ConformalAlgebra:
    """Affine algebra of a Lie algebra: x_0 y = [x, y], all other products zero.

    ``bracket`` maps (x, y) to {z: coefficient}.
    """
    table = {}
    for (x, y), value in bracket.items():
        table[(x, y, 0)] = FreeHtModuleElement({(z, 0): c for z, c in value.items()})
    return ConformalAlgebra(generators, table, name)


SL2_BRACKET = {
    ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
    ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2},
}


def sl2() -> ConformalAlgebra:
    return current_algebra(("e", "f", "h"), SL2_BRACKET, "sl2")


def abelian(generators=("X",)) -> ConformalAlgebra:
    return ConformalAlgebra(generators, {}, "abelian")


ALGEBRAS = {"ctoda": ctoda, "ctoda-typo": ctoda_typo, "sl2": sl2, "abelian": abelian}


def get_algebra(name: str) -> ConformalAlgebra:
    if name not in ALGEBRAS:
        raise MalformedInputError(f"unknown algebra {name!r}; choose from {sorted(ALGEBRAS)}")
    return ALGEBRAS[name]()


# axioms -----------------------------------------------------------------------------

def check_axioms(alg: ConformalAlgebra, shift_bound: int = 3) -> dict:
    """Finiteness, covariance, skew-symmetry and the commutator identity on a window.

    Skew-symmetry: x_n y = -T^n <y_{-n} x>.
    Commutator: x_m (y_n z) - y_n (x_m z) = (x_{m-n} y)_n z.
    Elements are shifted generators T^s g with |s| <= shift_bound; the
    commutator identity is checked with z unshifted (covariance moves
    any shift of z into the indices m, n).
    """
    violations = []
    shifts = range(-shift_bound, shift_bound + 1)
    width = max((abs(n) for (_, _, n) in alg.table), default=0)
    span = range(-(width + 2 * shift_bound + 1), width + 2 * shift_bound + 2)
    samples = 0

    for (a, b, n), value in alg.table.items():
        if not isinstance(value, FreeHtModuleElement):
            violations.append({"axiom": "finiteness", "entry": (a, b, n)})

    for a, b in product(alg.generators, repeat=2):
        for p, q in product(shifts, repeat=2):
            x, y = FreeHtModuleElement.gen(a, p), FreeHtModuleElement.gen(b, q)
            # covariance is structural; confirm T^p on the left reindexes
            for n in span:
                samples += 1
                lhs = conf_product(alg, x, n, y)
                if lhs != conf_product(alg, a, n + p - q, b).shift(q):
                    violations.append({"axiom": "covariance", "x": repr(x), "n": n, "y": repr(y)})
                rhs = -conf_product(alg, y, -n, x).shift(n)
                if lhs != rhs:
                    violations.append({"axiom": "skew-symmetry", "x": repr(x), "n": n, "y": repr(y),
                                       "lhs": repr(lhs), "rhs": repr(rhs)})

    for a, b, c in product(alg.generators, repeat=3):
        z = FreeHtModuleElement.gen(c)
        for p, q in product(shifts, repeat=2):
            x, y = FreeHtModuleElement.gen(a, p), FreeHtModuleElement.gen(b, q)
            for m, n in product(span, repeat=2):
                samples += 1
                lhs = _op(alg, x, m, _op(alg, y, n, z)) - _op(alg, y, n, _op(alg, x, m, z))
                rhs = conf_product(alg, conf_product(alg, x, m - n, y), n, z)
                if lhs != rhs:
                    violations.append({"axiom": "commutator", "x": repr(x), "m": m, "y": repr(y),
                                       "n": n, "z": c, "lhs": repr(lhs), "rhs": repr(rhs)})
    return {"check": "conformal_axioms", "algebra": alg.name, "window": shift_bound,
            "samples": samples, "violations": violations, "ok": not violations}


def _op(alg, x, m, y):
    if not y:
        return FreeHtModuleElement()
    return conf_product(alg, x, m, y)


def coinv_bracket(alg: ConformalAlgebra) -> dict:
    """Lie bracket on coinvariants: [a~, b~] = image of sum_n a_n b with shifts forgotten."""
    out = {}
    for a, b in product(alg.generators, repeat=2):
        total = FreeHtModuleElement()
        for n in alg.support(a, b):
            total = total + alg.entry(a, b, n)
        out[(a, b)] = total.forget_shifts()
    return out


def delta_products(alg: ConformalAlgebra, x, y) -> dict:
    """Components x_<k> y in the difference basis: sum_n x_n y T^n = sum_k x_<k> y Delta[k]."""
    out = {}
    for n in alg.nonzero_indices(x, y):
        value = conf_product(alg, x, n, y)
        if not value:
            continue
        for k, c in HtElement.monomial(n).to_delta_basis().items():
            out[k] = out.get(k, FreeHtModuleElement()) + value.scale(c)
    return {k: v for k, v in out.items() if v}


# loop algebra ------------------------------------------------------------------------

class LCElement:
    """Finite sum of f_{p} with f a generator and p in K; T^n g (x) p is stored as g (x) T^-n p."""

    __slots__ = ("parts",)

    def __init__(self, parts=None):
        self.parts = {a: p for a, p in (parts or {}).items() if p}

    @classmethod
    def of(cls, x, p) -> "LCElement":
        """The element x_{p} for a module element x and p in K."""
        out = LCElement()
        for (a, n), c in _elem(x).terms.items():
            out = out + LCElement({a: p.shift(-n).scale(c)})
        return out

    def __eq__(self, other):
        if not isinstance(other, LCElement):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def __bool__(self):
        return bool(self.parts)

    def __add__(self, other):
        out = dict(self.parts)
        for a, p in other.parts.items():
            out[a] = out[a] + p if a in out else p
        return LCElement(out)

    def __neg__(self):
        return LCElement({a: -p for a, p in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LCElement({a: p.scale(c) for a, p in self.parts.items()})

    def __repr__(self):
        return " + ".join(f"{a}_{{{p!r}}}" for a, p in sorted(self.parts.items())) or "0"


def lc_bracket(alg: ConformalAlgebra, u: LCElement, v: LCElement) -> LCElement:
    """[f_{p}, g_{q}] = sum_k (f_<k> g)_{Delta[k]<p> q}."""
    out = LCElement()
    for a, p in u.parts.items():
        for b, q in v.parts.items():
            for k, value in delta_products(alg, a, b).items():
                arg = p.act(HtElement.delta_basis(k)) * q
                out = out + LCElement.of(value, arg)
    return out


def lc_bracket_shift_form(alg: ConformalAlgebra, u: LCElement, v: LCElement) -> LCElement:
    """Same bracket from the shift components: sum_n (f_n g)_{T^n<p> q}."""
    out = LCElement()
    for a, p in u.parts.items():
        for b, q in v.parts.items():
            for n in alg.nonzero_indices(a, b):
                value = conf_product(alg, a, n, b)
                if value:
                    out = out + LCElement.of(value, p.shift(n) * q)
    return out


# vertex operators and currents --------------------------------------------------------

def ysing(alg: ConformalAlgebra, x, y) -> dict:
    """Singular vertex operator: sum_n x_n y (x) S(T^n)(1/tau), keyed by the pole of 1/(tau - n)."""
    out = {}
    for n in alg.nonzero_indices(x, y):
        value = conf_product(alg, x, n, y)
        if value:
            key = (-n, 0)
            out[key] = out.get(key, FreeHtModuleElement()) + value
    return {k: v for k, v in out.items() if v}


def ysing_as_k(alg: ConformalAlgebra, x, y) -> dict:
    """Y_Sing(x, tau) y as generator -> K-valued coefficient after absorbing shifts."""
    out = {}
    for (n, k), value in ysing(alg, x, y).items():
        for (g, s), c in value.terms.items():
            piece = KElement.sing_basis(n, k, c)
            out[(g, s)] = out[(g, s)] + piece if (g, s) in out else piece
    return {k: v for k, v in out.items() if v}


def current_commutator(alg: ConformalAlgebra, x, y) -> dict:
    """[x(tau_1), y(tau_2)] = sum_k (x_<k> y)(tau_2) Delta[k]_2 delta, as k -> x_<k> y."""
    return delta_products(alg, x, y)


# vertex-Poisson structure from a two-variable bracket table ---------------------------

def derived_bracket_operator(table: dict, f: DiffPoly, g: DiffPoly) -> VHtOperator:
    """D(f (x) g) with {f(tau_1), g(tau_2)} = D(f (x) g)(tau_2) delta.

    ``table`` maps generator pairs to operators; generators are extended by
    D(T^a u (x) T^b v) = T^b o D(u (x) v) o T^-a, polynomials as derivations.
    """
    out = VHtOperator()
    for a_sym, a in sorted(f.generators()):
        df = f.partial(a_sym, a)
        for b_sym, b in sorted(g.generators()):
            base = table.get((a_sym, b_sym))
            if not base:
                continue
            dg = g.partial(b_sym, b)
            op = VHtOperator.shift_op(b) * base * VHtOperator.shift_op(-a)
            out = out + VHtOperator.multiplication(dg) * op * VHtOperator.multiplication(df)
    return out


def vertex_poisson_check(table: dict, generators, shift_bound: int = 3) -> dict:
    """Skew-symmetry D(f(x)g) = -D(g(x)f)* and shift covariance on shifted generators."""
    violations = []
    samples = 0
    shifts = range(-shift_bound, shift_bound + 1)
    tee = VHtOperator.shift_op(1)
    tee_inv = VHtOperator.shift_op(-1)
    for a, b in product(generators, repeat=2):
        for p, q in product(shifts, repeat=2):
            f, g = DiffPoly.gen(a, p), DiffPoly.gen(b, q)
            samples += 1
            d = derived_bracket_operator(table, f, g)
            if d != -derived_bracket_operator(table, g, f).adjoint():
                violations.append({"property": "skew", "f": repr(f), "g": repr(g)})
            if derived_bracket_operator(table, f.shift(1), g) != d * tee_inv:
                violations.append({"property": "covariance-left", "f": repr(f), "g": repr(g)})
            if derived_bracket_operator(table, f, g.shift(1)) != tee * d:
                violations.append({"property": "covariance-right", "f": repr(f), "g": repr(g)})
    return {"check": "vertex_poisson", "window": shift_bound, "samples": samples,
            "violations": violations, "ok": not violations}


# JSON --------------------------------------------------------------------------------

def algebra_from_json(obj) -> ConformalAlgebra:
    """Load {"generators": [...], "table": [{"lhs": [a, b], "n": n, "rhs": [[c, g, q], ...]}]}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        generators = [str(g) for g in obj["generators"]]
        table = {}
        for entry in obj.get("table", []):
            a, b = entry["lhs"]
            n = entry["n"]
            if isinstance(n, bool) or not isinstance(n, int):
                raise MalformedInputError(f"product index must be an integer: {n!r}")
            value = FreeHtModuleElement()
            for c, g, q in entry["rhs"]:
                if isinstance(q, bool) or not isinstance(q, int):
                    raise MalformedInputError(f"shift must be an integer: {q!r}")
                value = value + FreeHtModuleElement.gen(str(g), q, as_rational(c))
            key = (str(a), str(b), n)
            table[key] = table[key] + value if key in table else value
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedInputError):
            raise
        raise MalformedInputError(f"malformed conformal algebra description: {exc}") from exc
    return ConformalAlgebra(generators, table, obj.get("name", ""))


def algebra_to_json(alg: ConformalAlgebra) -> dict:
    table = []
    for (a, b, n), value in sorted(alg.table.items()):
        rhs = [[str(Fraction(c)), g, q] for (g, q), c in value.items()]
        table.append({"lhs": [a, b], "n": n, "rhs": rhs})
    return {"name": alg.name, "generators": list(alg.generators), "table": table}


def load_algebra(path: str) -> ConformalAlgebra:
    with open(path, encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))
