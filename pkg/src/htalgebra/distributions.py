"""Distributions on K in one and two variables.

A one-variable distribution is given by its components on the basis of K:
("pol", l) stands for tau(l) and ("sing", n, k) for alpha(e_{n,k}), the
singular function S(e_{n,k})(1/tau).  A rational distribution carries a
kernel F with component(b) = Tr(F b).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

import sympy

from ._poly import integer_roots
from .errors import NotRationalError, UnsupportedError
from .hopf import HatHtElement, HtElement, as_rational, falling
from .localization import KElement, alpha, alpha_inverse
from .sequences import CzpolElement, _basis_product, dual_difference_value


# basis of K --------------------------------------------------------------

def basis_function(index) -> KElement:
    """The element of K named by a basis index."""
    if index[0] == "pol":
        return KElement.tau(index[1])
    if index[0] == "sing":
        _, n, k = index
        return alpha(HatHtElement.e_basis(n, k))
    raise ValueError(f"unknown basis index {index!r}")


def decompose(f: KElement) -> dict:
    """Coordinates of f over the basis indices."""
    out = {("pol", l): c for l, c in f.pol.items()}
    for (n, k), c in alpha_inverse(f).to_e_basis().items():
        out[("sing", n, k)] = c
    return out


def basis_window(bound: int, max_order: int = 2):
    """Basis indices with |n| <= bound, l <= bound and pole order <= max_order."""
    out = [("pol", l) for l in range(bound + 1)]
    out += [("sing", n, k) for n in range(-bound, bound + 1) for k in range(max_order + 1)]
    return out


def _lin(pairs):
    """Linear combination of (coefficient, value) pairs for scalars or module elements."""
    total = None
    for c, value in pairs:
        if not c:
            continue
        term = value * c if not hasattr(value, "scale") else value.scale(c)
        total = term if total is None else total + term
    return Fraction(0) if total is None else total


class Distribution1:
    """Linear functional on K, specified by basis components."""

    def __init__(self, component, kernel: KElement | None = None, hol_degree: int | None = None):
        self._component = component
        self._memo = {}
        self.kernel = kernel
        if hol_degree is None and kernel is not None:
            hol_degree = kernel.poly.degree
        self.hol_degree = hol_degree

    @classmethod
    def from_kernel(cls, kernel: KElement) -> "Distribution1":
        return cls(lambda b: (kernel * basis_function(b)).trace(), kernel=kernel)

    def component(self, index):
        if index not in self._memo:
            self._memo[index] = self._component(index)
        return self._memo[index]

    def __call__(self, f: KElement):
        if self.kernel is not None:
            return (self.kernel * f).trace()
        return _lin((c, self.component(b)) for b, c in decompose(f).items())

    def hol_part(self) -> "Distribution1":
        if self.kernel is None:
            raise UnsupportedError("holomorphic part needs a kernel certificate")
        return Distribution1.from_kernel(self.kernel.hol_part())

    def sing_part(self) -> "Distribution1":
        if self.kernel is None:
            raise UnsupportedError("singular part needs a kernel certificate")
        return Distribution1.from_kernel(self.kernel.sing_part())

    def at_zero(self):
        """Value at tau = 0, defined as the value on 1/tau."""
        return self(KElement.sing_basis(0))

    def agrees_with(self, other: "Distribution1", indices) -> bool:
        return all(self.component(b) == other.component(b) for b in indices)


# two-variable special kernels ----------------------------------------------------

def _pol_degree(f: KElement) -> int:
    return f.poly.degree


class SpecialKernel:
    """One of the three expansions delta, rho, lambda of 1/(tau1 - tau2)."""

    KINDS = ("delta", "rho", "lambda")

    def __init__(self, kind: str):
        if kind not in self.KINDS:
            raise ValueError(f"unknown kernel {kind!r}")
        self.kind = kind

    def terms(self, deg1: int, deg2: int):
        """Finitely many (coefficient, a(tau1), b(tau2)) kernel terms that can be
        nonzero against test functions whose polynomial parts have degrees deg1, deg2."""
        out = []
        if self.kind in ("delta", "rho"):
            for l in range(deg1 + 1):
                out.append((1, KElement.tau(-l - 1), KElement.tau(l)))
        if self.kind in ("delta", "lambda"):
            sign = 1 if self.kind == "delta" else -1
            for l in range(deg2 + 1):
                out.append((sign, KElement.tau(l), KElement.tau(-l - 1)))
        return out

    def __call__(self, f: KElement, g: KElement) -> Fraction:
        total = Fraction(0)
        for c, a, b in self.terms(_pol_degree(f), _pol_degree(g)):
            total += c * (f * a).trace() * (g * b).trace()
        return total


def dirac_delta() -> SpecialKernel:
    return SpecialKernel("delta")


def rho() -> SpecialKernel:
    return SpecialKernel("rho")


def lam() -> SpecialKernel:
    return SpecialKernel("lambda")


def distr_trace_in(d: Distribution1, kernel: SpecialKernel, var: int) -> Distribution1:
    """Trace of D(tau_var) times a special kernel over tau_var.

    The result is a distribution in the other variable: D for delta, D_Hol
    or D_Sing (with signs) for rho and lambda.
    """
    if not isinstance(kernel, SpecialKernel):
        raise UnsupportedError("only products with delta, rho or lambda can be traced")
    if var not in (1, 2):
        raise ValueError("variable must be 1 or 2")
    hol = d.hol_degree

    def component(b):
        g = basis_function(b)
        gdeg = _pol_degree(g)
        if var == 1:
            terms = kernel.terms(_bound_for(hol, kernel, 1), gdeg)
            return _lin((c * (g * bb).trace(), d(a)) for c, a, bb in terms)
        terms = kernel.terms(gdeg, _bound_for(hol, kernel, 2))
        return _lin((c * (g * a).trace(), d(bb)) for c, a, bb in terms)

    return Distribution1(component)


def _bound_for(hol, kernel, var):
    # Terms pairing D with 1/tau(l+1) vanish once l exceeds the polynomial degree of D's kernel.
    needs_hol = (var == 1 and kernel.kind in ("delta", "rho")) or (var == 2 and kernel.kind in ("delta", "lambda"))
    if needs_hol and hol is None:
        raise UnsupportedError("the distribution needs a holomorphic-support certificate")
    return hol if hol is not None else -1


# exponentials ------------------------------------------------------------------

BASES = ("delta", "ht", "hat")


def _basis_element(basis: str, index) -> HatHtElement:
    if basis == "delta":
        return HtElement.delta_basis(index).to_hat()
    if basis == "ht":
        return HtElement.delta_basis(index).to_hat()
    if basis == "hat":
        return HatHtElement.e_basis(*index)
    raise ValueError(f"unknown basis {basis!r}")


def dual_basis_indices(basis: str, bound: int):
    if basis == "delta":
        return list(range(bound + 1))
    if basis == "ht":
        return list(range(-bound, bound + 1))
    return [(n, k) for n in range(-bound, bound + 1) for k in range(bound + 1)]


class Exponential:
    """The formal sum of e_i(v) (x) e*_i, or of S(e_i)(v) (x) e*_i when twisted."""

    def __init__(self, kind: str, v, basis: str = "delta"):
        if kind not in ("R", "L", "R^S", "L^S"):
            raise ValueError(f"unknown exponential {kind!r}")
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.kind = kind
        self.v = v
        self.basis = basis
        self.twisted = kind.endswith("^S")
        self.slot = 1 if kind.startswith("R") else 0

    def component(self, index):
        e = _basis_element(self.basis, index)
        if self.twisted:
            e = e.antipode()
        return self.v.act(e)

    def evaluate(self, g: KElement):
        """Pair the dual-basis factor with a test function through the trace.

        Only the Delta-semigroup basis has dual functions in K (tau(l)); the sum
        is finite when v is a polynomial sequence or g is polynomial.
        """
        if self.basis != "delta":
            raise UnsupportedError("only the Delta-semigroup exponential pairs with K directly")
        v_poly = isinstance(self.v, CzpolElement) or (isinstance(self.v, KElement) and self.v.is_polynomial())
        if not v_poly and g.sing:
            raise UnsupportedError("exponential of a singular element does not extend to singular test functions")
        if not g.sing:
            return _lin([])
        deg = self.v.degree if isinstance(self.v, CzpolElement) else self.v.poly.degree
        return _lin(((KElement.tau(l) * g).trace(), self.component(l)) for l in range(deg + 1))


def exp_apply(kind: str, v, basis: str = "delta") -> Exponential:
    """Exponential operator of the given kind applied to a module element."""
    return Exponential(kind, v, basis)


@lru_cache(maxsize=None)
def dual_structure_constants(basis: str, c):
    """Pairs (i, j) with the coefficient of e*_c in e*_i e*_j.

    Computed from products of the dual basis as functions, independently of
    the coproduct: tau products for the Delta semigroup, pointwise products
    of the dual difference sequences for H_T.  The extended basis uses the
    coproduct of e_c.
    """
    out = {}
    if basis == "delta":
        for i in range(c + 1):
            for j in range(c + 1):
                v = _basis_product(i, j).get(c, 0)
                if v:
                    out[(i, j)] = Fraction(v)
        return out
    if basis == "ht":
        span = abs(c)
        delta_c = HtElement.delta_basis(c)
        for i in range(-span, span + 1):
            for j in range(-span, span + 1):
                v = sum((w * dual_difference_value(i, n) * dual_difference_value(j, n)
                         for n, w in delta_c.terms.items()), Fraction(0))
                if v:
                    out[(i, j)] = v
        return out
    n, k = c
    for ((m, a), (_, b)), w in HatHtElement.e_basis(n, k).coproduct().items():
        left = HtElement.monomial(m).to_delta_basis()
        right = left
        for i, x in left.items():
            for j, y in right.items():
                key = ((i, a), (j, b))
                out[key] = out.get(key, 0) + w * x * y
    return {k2: v for k2, v in out.items() if v}


def check_inverse_exponentials(v, basis: str, bound: int) -> list:
    """R composed with R^S (and the reverse) is the identity, componentwise.

    Returns the list of failing indices.
    """
    failures = []
    for c in dual_basis_indices(basis, bound):
        unit = v if c in (0, (0, 0)) else _zero_like(v)
        for first, second in ((False, True), (True, False)):
            total = _zero_like(v)
            for (i, j), w in dual_structure_constants(basis, c).items():
                ei = _basis_element(basis, i)
                ej = _basis_element(basis, j)
                if first:
                    ei = ei.antipode()
                if second:
                    ej = ej.antipode()
                total = total + v.act(ej).act(ei).scale(w)
            if total != unit:
                failures.append((c, first, second))
    return failures


def check_multiplicativity(f, g, basis: str, bound: int, twisted: bool = False) -> list:
    """e_c(fg) = sum over (i, j) of struct(c; i, j) e_i(f) e_j(g)."""
    failures = []
    for c in dual_basis_indices(basis, bound):
        ec = _basis_element(basis, c)
        if twisted:
            ec = ec.antipode()
        lhs = (f * g).act(ec)
        rhs = _zero_like(f)
        for (i, j), w in dual_structure_constants(basis, c).items():
            ei = _basis_element(basis, i)
            ej = _basis_element(basis, j)
            if twisted:
                ei, ej = ei.antipode(), ej.antipode()
            rhs = rhs + (f.act(ei) * g.act(ej)).scale(w)
        if lhs != rhs:
            failures.append(c)
    return failures


def adjoint_action(h: HatHtElement, x_map, v):
    """ad_h(X)(v) = sum h' X(S(h'') v) using the coproduct of h."""
    total = _zero_like(v)
    for ((n, a), (_, b)), c in HatHtElement.coerce(h).coproduct().items():
        left = HatHtElement.monomial(n, a)
        right = HatHtElement.monomial(n, b).antipode()
        total = total + x_map(v.act(right)).act(left).scale(c)
    return total


def check_adjoint_action(x_map, v, basis: str, bound: int) -> list:
    """ad_{e_c}(X) agrees with sum struct(c; i, j) e_i X S(e_j), the component form of R X R^S."""
    failures = []
    for c in dual_basis_indices(basis, bound):
        lhs = adjoint_action(_basis_element(basis, c), x_map, v)
        rhs = _zero_like(v)
        for (i, j), w in dual_structure_constants(basis, c).items():
            ei = _basis_element(basis, i)
            ej = _basis_element(basis, j).antipode()
            rhs = rhs + x_map(v.act(ej)).act(ei).scale(w)
        if lhs != rhs:
            failures.append(c)
    return failures


def check_partial_summation(h, f: KElement, g: KElement) -> bool:
    """Tr(h<F> G) = Tr(F S(h)<G>)."""
    h = HatHtElement.coerce(h)
    return (f.act(h) * g).trace() == (f * g.act(h.antipode())).trace()


def _zero_like(v):
    if isinstance(v, KElement):
        return KElement()
    if isinstance(v, CzpolElement):
        return CzpolElement()
    return type(v)()


# multivariable polynomials in the falling-factorial basis -----------------------

class FFPoly:
    """Polynomial in several variables, basis tau_1(l_1) ... tau_m(l_m)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for key, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                clean[tuple(key)] = clean.get(tuple(key), 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def embed(cls, f: CzpolElement, var: int, nvars: int) -> "FFPoly":
        return cls(nvars, {tuple(l if i == var else 0 for i in range(nvars)): c for l, c in f.terms.items()})

    def __eq__(self, other):
        return isinstance(other, FFPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return FFPoly(self.nvars, out)

    def __neg__(self):
        return FFPoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return FFPoly(self.nvars, {k: v * as_rational(c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                factors = [_basis_product(i, j) for i, j in zip(a, b)]
                for combo in product(*[list(f.items()) for f in factors]):
                    key = tuple(k for k, _ in combo)
                    w = x * y
                    for _, d in combo:
                        w *= d
                    out[key] = out.get(key, 0) + w
        return FFPoly(self.nvars, out)

    def act(self, var: int, h) -> "FFPoly":
        """Apply h in H_T (or its extension) to one variable."""
        out = FFPoly(self.nvars)
        for key, c in self.terms.items():
            image = CzpolElement.tau(key[var]).act(h)
            for l, d in image.terms.items():
                new = key[:var] + (l,) + key[var + 1:]
                out = out + FFPoly(self.nvars, {new: c * d})
        return out

    def map_var(self, var: int, fn) -> "FFPoly":
        out = FFPoly(self.nvars)
        for key, c in self.terms.items():
            for l, d in fn(CzpolElement.tau(key[var])).terms.items():
                new = key[:var] + (l,) + key[var + 1:]
                out = out + FFPoly(self.nvars, {new: c * d})
        return out

    def restrict_diagonal(self, keep: int, drop: int) -> "FFPoly":
        """Set tau_drop = tau_keep and remove variable drop."""
        out = FFPoly(self.nvars - 1)
        for key, c in self.terms.items():
            merged = _basis_product(key[keep], key[drop])
            for l, d in merged.items():
                new = list(key)
                new[keep] = l
                del new[drop]
                out = out + FFPoly(self.nvars - 1, {tuple(new): c * d})
        return out

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for key, c in self.terms.items():
            w = c
            for n, l in zip(point, key):
                w *= falling(n, l)
            total += w
        return total

    def to_czpol(self) -> CzpolElement:
        if self.nvars != 1:
            raise ValueError("only one-variable polynomials convert to sequences")
        return CzpolElement({k[0]: c for k, c in self.terms.items()})


def twisted_coproduct_poly(f: CzpolElement, i: int = 0, j: int = 1, nvars: int = 2) -> FFPoly:
    """m*_{1(x)S}(f) = sum_l tau_i(l) S(Delta[l] f)(tau_j), the function f(tau_i - tau_j)."""
    out = FFPoly(nvars)
    for l in range(f.degree + 1):
        right = f.difference(l).antipode()
        out = out + FFPoly.embed(CzpolElement.tau(l), i, nvars) * FFPoly.embed(right, j, nvars)
    return out


def tau_difference(l: int, i: int, j: int, nvars: int = 3) -> FFPoly:
    """tau_ij[l] = tau[l](tau_i - tau_j)."""
    return twisted_coproduct_poly(CzpolElement.tau(l), i, j, nvars)


def multivariable_identity(l: int) -> bool:
    """tau_12[l] = sum_s C(l, s) tau_13[l - s] tau_32[s]."""
    lhs = tau_difference(l, 0, 1)
    rhs = FFPoly(3)
    for s in range(l + 1):
        rhs = rhs + (tau_difference(l - s, 0, 2) * tau_difference(s, 2, 1)).scale(comb(l, s))
    return lhs == rhs


def delta_expansion(p: HtElement) -> dict:
    """Coefficients a_j with P_2 delta = sum_j a_j Delta_2[j] delta, for P with nonnegative exponents."""
    if any(n < 0 for n in p.terms):
        raise UnsupportedError("negative powers of T have no finite Delta-semigroup expansion")
    return p.to_delta_basis()


def commutator_component(expansion: dict, j: int):
    """a_j(tau_2) = Tr_tau1(D tau_{1(x)S}[j]) for D = sum_m a_m(tau_2) Delta_2[m] delta.

    Delta_2[m] delta equals S(Delta[m])_1 delta; partial summation moves
    Delta[m] onto the polynomial in tau_1, and the trace against delta sets
    tau_1 = tau_2.
    """
    if j < 0:
        raise ValueError("coefficients are indexed by j >= 0")
    poly = twisted_coproduct_poly(CzpolElement.tau(j))
    pairs = []
    for m, a in expansion.items():
        restricted = poly.act(0, HtElement.delta_basis(m)).restrict_diagonal(1, 0).to_czpol()
        if not restricted:
            continue
        if isinstance(a, CzpolElement):
            pairs.append((1, a * restricted))
        elif restricted.degree == 0:
            pairs.append((restricted.coeff(0), a))
        else:
            raise UnsupportedError("non-constant weight for a non-sequence coefficient")
    return _lin(pairs)


def normal_form_two_var(p_terms: dict) -> dict:
    """Normal form of sum_n p_n(tau_1) T_1^n<delta>, all shifts moved to slot 2.

    Returns {k: c} meaning sum_k c(tau_2) T_2^k<delta>; uses
    T_1^n<delta> = T_2^-n<delta> and F(tau_1) T_2^k<delta> = (T^k F)(tau_2) T_2^k<delta>.
    """
    out = {}
    for n, p in p_terms.items():
        k = -n
        moved = p.shift(k)
        out[k] = out[k] + moved if k in out else moved
    return {k: v for k, v in out.items() if v}


def rational_reconstruct(components, annihilator: CzpolElement) -> KElement:
    """Recover a singular kernel from components d_k = D(tau(k)), k = 0..K.

    The annihilator F must have integer roots.  The components must satisfy
    sum_k [tau(k) in F tau(m)] d_k = 0 whenever all d_k involved are known;
    the kernel is then solved from the first deg F components and checked
    against the rest.
    """
    d = [as_rational(c) for c in components]
    big_k = len(d) - 1
    fpoly = annihilator.to_poly()
    deg = fpoly.degree
    if deg < 0:
        raise NotRationalError("annihilator must be nonzero")
    for m in range(0, big_k - deg + 1):
        row = annihilator * CzpolElement.tau(m)
        if sum((c * d[k] for k, c in row.terms.items()), Fraction(0)) != 0:
            raise NotRationalError(f"recursion fails at m = {m}")
    roots = integer_roots(fpoly)
    unknowns = [(r, i) for r, mult in sorted(roots.items()) for i in range(mult)]
    if len(unknowns) != deg:
        raise NotRationalError("annihilator must split over the integers")
    if not unknowns:
        if any(d):
            raise NotRationalError("nonzero components with a constant annihilator")
        return KElement()
    rows = min(len(d), deg)
    matrix = sympy.Matrix(rows, deg, lambda k, col: _rat(_pairing_value(k, *unknowns[col])))
    rhs = sympy.Matrix(rows, 1, lambda k, _: _rat(d[k]))
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError as exc:
        raise NotRationalError("no kernel with the given poles") from exc
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    sing = {(-r, i): Fraction(int(sympy.fraction(val)[0]), int(sympy.fraction(val)[1]))
            for (r, i), val in zip(unknowns, solution)}
    kernel = KElement(sing=sing)
    for k, value in enumerate(d):
        if (kernel * KElement.tau(k)).trace() != value:
            raise NotRationalError(f"component {k} is not reproduced")
    return kernel


def _rat(x: Fraction):
    return sympy.Rational(x.numerator, x.denominator)


def _pairing_value(k: int, root: int, order_index: int) -> Fraction:
    return (KElement.tau(k) * KElement.pole(root, order_index + 1)).trace()


def poly_separate(f_coeffs, h_coeffs):
    """Find nonzero q(u, v), r(u, v) with F(u) q + H(v) r a polynomial in x = u + v.

    F and H are given as coefficient lists (lowest degree first).  The
    cofactors come from the extended Euclidean algorithm for F(u) and
    H(x - u) over Q(x), with denominators cleared.  Returns sympy
    expressions (q, r, k) in the symbols u, v, x with F q + H r = k(u + v).
    """
    u, v, x = sympy.symbols("u v x")
    f = sum(sympy.Rational(c) * u ** i for i, c in enumerate(f_coeffs))
    h = sum(sympy.Rational(c) * v ** i for i, c in enumerate(h_coeffs))
    if f == 0 or h == 0:
        raise ValueError("both polynomials must be nonzero")
    domain = sympy.QQ.frac_field(x)
    fp = sympy.Poly(f, u, domain=domain)
    hp = sympy.Poly(h.subs(v, x - u), u, domain=domain)
    s, t, g = sympy.gcdex(fp, hp)
    s_expr = sympy.together(s.as_expr() / g.as_expr())
    t_expr = sympy.together(t.as_expr() / g.as_expr())
    denom = sympy.lcm(sympy.denom(s_expr), sympy.denom(t_expr))
    q = sympy.expand(sympy.cancel(s_expr * denom).subs(x, u + v))
    r = sympy.expand(sympy.cancel(t_expr * denom).subs(x, u + v))
    if r == 0:
        q, r = sympy.expand(q - h), f
    elif q == 0:
        q, r = h, sympy.expand(r - f)
    y = sympy.Symbol("y")
    k = sympy.expand((f * q + h * r).subs({u: (x + y) / 2, v: (x - y) / 2}, simultaneous=True))
    return q, r, k
