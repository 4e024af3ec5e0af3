"""Vertex algebras induced from a conformal algebra, truncated at a degree bound.

The loop algebra g (x) K splits into a creation part g (x) K_Sing and an
annihilation part g (x) K_Hol.  States are PBW monomials of creation
symbols applied to the vacuum; a symbol (g, n, k) stands for
g_{1/(x+n)^(k+1)}.  Annihilators kill the vacuum.

Fields are built from the generators by normal-ordered products.  Each
field exposes two operations:

* ``apply(F, s)``: the component Y(f)_F applied to a state, for F in K;
* ``pol_kernel(s)``: a finite representation of the polynomial components,
  Y(f)_P s = sum_u Tr(P kappa_u) u, returned as {monomial u: kappa_u}.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from ._poly import Poly
from .conformal import ConformalAlgebra, abelian, conf_product, ctoda, sl2
from .errors import BoundExceededError, MalformedInputError
from .hopf import HatHtElement, HtElement, LinearCombination
from .localization import KElement, alpha_inverse, convolve, taylor_functionals


class VertexState(LinearCombination):
    """Linear combination of sorted creation monomials applied to the vacuum."""

    @classmethod
    def vacuum(cls) -> "VertexState":
        return cls({(): 1})

    @classmethod
    def monomial(cls, symbols, c=1) -> "VertexState":
        return cls({tuple(symbols): c})

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            body = "·".join(f"{g}_{{{format_symbol(n, k)}}}" for g, n, k in mono)
            body = (body + "·v0") if body else "v0"
            parts.append(body if c == 1 else f"{c}·{body}")
        return " + ".join(parts)


def format_symbol(n: int, k: int) -> str:
    base = "x" if n == 0 else (f"(x+{n})" if n > 0 else f"(x-{-n})")
    return f"1/{base}" if k == 0 else f"1/{base}^{k + 1}"


def _kstate_add(out: dict, mono, kappa: KElement):
    if not kappa:
        return
    out[mono] = out[mono] + kappa if mono in out else kappa
    if not out[mono]:
        del out[mono]


def _kstate_add_state(out: dict, state: VertexState, kappa: KElement):
    for mono, c in state.terms.items():
        _kstate_add(out, mono, kappa.scale(c))


class VertexAlgebra:
    """The induced module of a conformal algebra, with fields and the extended shift action."""

    def __init__(self, conformal: ConformalAlgebra, bound: int = 4, name: str = ""):
        self.conformal = conformal
        self.bound = bound
        self.name = name or conformal.name
        self._terms = {}
        self._fields = {}
        self.create = lru_cache(maxsize=None)(self._create)
        self._gen_apply = lru_cache(maxsize=None)(self._generator_apply)
        self._gen_kernel = lru_cache(maxsize=None)(self._generator_kernel)

    @property
    def generators(self):
        return self.conformal.generators

    def vacuum(self) -> VertexState:
        return VertexState.vacuum()

    def generator_state(self, g: str) -> VertexState:
        """g_{1/x} v0, the state attached to the generator."""
        self._check_generator(g)
        return VertexState.monomial([(g, 0, 0)])

    def _check_generator(self, g):
        if g not in self.generators:
            raise MalformedInputError(f"unknown generator {g!r}")

    # loop algebra bracket ------------------------------------------------------
    def bracket_terms(self, a: str, b: str) -> list:
        """[a_p, b_q] = sum c * g_{(T^i p)(T^j q)} as a list of (g, c, i, j)."""
        key = (a, b)
        if key not in self._terms:
            out = []
            for n in self.conformal.nonzero_indices(a, b):
                value = conf_product(self.conformal, a, n, b)
                for (g, m), c in value.terms.items():
                    out.append((g, c, n - m, -m))
            self._terms[key] = out
        return self._terms[key]

    def bracket(self, a: str, p: KElement, b: str, q: KElement) -> list:
        """[a_p, b_q] as a list of (generator, K-element)."""
        out = []
        for g, c, i, j in self.bracket_terms(a, b):
            val = (p.shift(i) * q.shift(j)).scale(c)
            if val:
                out.append((g, val))
        return out

    # module structure -------------------------------------------------------------
    def _create(self, sym, mono) -> VertexState:
        """sym applied to a sorted monomial, reordered into PBW form."""
        if not mono or sym <= mono[0]:
            if len(mono) + 1 > self.bound:
                raise BoundExceededError(f"degree {len(mono) + 1} exceeds the bound {self.bound}")
            return VertexState({(sym,) + mono: 1})
        first, rest = mono[0], mono[1:]
        out = self.create_state(first, self.create(sym, rest))
        g, n, k = sym
        h, m, j = first
        for gamma, val in self.bracket(g, KElement.sing_basis(n, k), h, KElement.sing_basis(m, j)):
            out = out + self.act_mono(gamma, val, rest)
        return out

    def create_state(self, sym, state: VertexState) -> VertexState:
        out = VertexState()
        for mono, c in state.terms.items():
            out = out + self.create(sym, mono).scale(c)
        return out

    def act(self, g: str, f, state: VertexState) -> VertexState:
        """The loop-algebra element g_{f} on a state; ``f`` is in K or a basis index."""
        self._check_generator(g)
        f = basis_element(f)
        out = VertexState()
        for mono, c in state.terms.items():
            out = out + self.act_mono(g, f, mono).scale(c)
        return out

    def act_mono(self, g: str, f: KElement, mono) -> VertexState:
        out = VertexState()
        for (n, k), c in f.sing.items():
            out = out + self.create((g, n, k), mono).scale(c)
        if f.poly:
            out = out + self._annihilate(g, KElement(f.poly), mono)
        return out

    def _annihilate(self, g: str, hol: KElement, mono) -> VertexState:
        if not mono:
            return VertexState()
        (h, m, j), rest = mono[0], mono[1:]
        out = self.create_state(mono[0], self._annihilate(g, hol, rest))
        for gamma, val in self.bracket(g, hol, h, KElement.sing_basis(m, j)):
            out = out + self.act_mono(gamma, val, rest)
        return out

    def hat_action(self, h, state: VertexState) -> VertexState:
        """Extended shift algebra on V: h.g_{p} = g_{S(h) p}, T grouplike, dtau primitive."""
        h = HatHtElement.coerce(h)
        out = VertexState()
        for mono, c in state.terms.items():
            for (n, l), d in h.terms.items():
                out = out + self._hat_mono(n, l, mono).scale(c * d)
        return out

    def _hat_mono(self, n: int, l: int, mono) -> VertexState:
        out = VertexState()
        m = len(mono)
        if m == 0:
            return VertexState.vacuum() if l == 0 else VertexState()
        for split in _compositions(l, m):
            state = VertexState.vacuum()
            for (g, a, k), li in zip(reversed(mono), reversed(split)):
                q = KElement.sing_basis(a, k).derivative(li).shift(-n).scale((-1) ** li)
                new = VertexState()
                for (b, j), c in q.sing.items():
                    new = new + self.create_state((g, b, j), state).scale(c)
                state = new
            out = out + state
        return out

    # fields -----------------------------------------------------------------------
    def field(self, state) -> "Field":
        """Y(state, tau) generated by normal-ordered products of generator fields."""
        if isinstance(state, tuple):
            return self._mono_field(state)
        return LinearField([(c, self._mono_field(m)) for m, c in state.terms.items()])

    def _mono_field(self, mono) -> "Field":
        if mono not in self._fields:
            if not mono:
                field = IdentityField()
            elif len(mono) == 1 and mono[0][1:] == (0, 0):
                field = GeneratorField(self, mono[0][0])
            else:
                g, n, k = mono[0]
                field = NormalOrderedField(self, g, KElement.sing_basis(n, k), self._mono_field(mono[1:]))
            self._fields[mono] = field
        return self._fields[mono]

    def _generator_apply(self, g, f, mono):
        return self.act_mono(g, f, mono)

    def _generator_kernel(self, g: str, mono) -> dict:
        """Kernel of P -> g_P on a monomial."""
        out = {}
        if not mono:
            return out
        (b, n, k), rest = mono[0], mono[1:]
        q = KElement.sing_basis(n, k)
        for gamma, c, i, j in self.bracket_terms(g, b):
            qj = q.shift(j)
            for lam, beta, cc in taylor_functionals(qj):
                state = self.create((gamma,) + beta, rest)
                _kstate_add_state(out, state, KElement.sing_basis(*lam).shift(-i).scale(c * cc))
            for t, kappa in self._gen_kernel(gamma, rest).items():
                _kstate_add(out, t, (qj * kappa).shift(-i).scale(c))
        for t, kappa in self._gen_kernel(g, rest).items():
            _kstate_add_state(out, self.create(mono[0], t), kappa)
        return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class Field:
    """A field f(tau); subclasses give apply and pol_kernel on monomials."""

    def apply(self, f, state: VertexState) -> VertexState:
        f = basis_element(f)
        out = VertexState()
        for mono, c in state.terms.items():
            out = out + self.apply_mono(f, mono).scale(c)
        return out

    def pol_kernel(self, state: VertexState) -> dict:
        out = {}
        for mono, c in state.terms.items():
            for t, kappa in self.kernel_mono(mono).items():
                _kstate_add(out, t, kappa.scale(c))
        return out


class IdentityField(Field):
    """Y(v0, tau): component at F is Tr(F) times the identity."""

    def apply_mono(self, f: KElement, mono) -> VertexState:
        tr = f.trace()
        return VertexState({mono: tr}) if tr else VertexState()

    def kernel_mono(self, mono) -> dict:
        return {}


class GeneratorField(Field):
    """The current g(tau), with components g_F acting through the module."""

    def __init__(self, algebra: VertexAlgebra, g: str):
        self.algebra, self.g = algebra, g

    def apply_mono(self, f: KElement, mono) -> VertexState:
        return self.algebra._gen_apply(self.g, f, mono)

    def kernel_mono(self, mono) -> dict:
        return self.algebra._gen_kernel(self.g, mono)


class LinearField(Field):
    def __init__(self, parts):
        self.parts = parts

    def apply_mono(self, f, mono):
        out = VertexState()
        for c, field in self.parts:
            out = out + field.apply_mono(f, mono).scale(c)
        return out

    def kernel_mono(self, mono):
        out = {}
        for c, field in self.parts:
            for t, kappa in field.kernel_mono(mono).items():
                _kstate_add(out, t, kappa.scale(c))
        return out


class NormalOrderedField(Field):
    """The G-th normal-ordered product of the current g(tau) with an inner field.

    Its state is g_G applied to the inner field's state.
    """

    def __init__(self, algebra: VertexAlgebra, g: str, pole: KElement, inner: Field):
        self.algebra = algebra
        self.outer = algebra._mono_field(((g, 0, 0),))
        self.pole = pole
        self.pole_s = pole.antipode()
        self.inner = inner
        self._apply = lru_cache(maxsize=None)(self._apply_mono)
        self._kernel = lru_cache(maxsize=None)(self._kernel_mono)

    def apply_mono(self, f, mono):
        return self._apply(f, mono)

    def kernel_mono(self, mono):
        return self._kernel(mono)

    def _apply_mono(self, f: KElement, mono) -> VertexState:
        state = VertexState({mono: 1})
        out = VertexState()
        for t, kappa in self.inner.kernel_mono(mono).items():
            m = (f * kappa).sing_part()
            if m:
                out = out + self.outer.apply_mono(convolve(self.pole, m), t)
        for (n, k), c in f.sing.items():
            r = -n
            for i in range(k + 1):
                inner = self.inner.apply(KElement.pole(r, k + 1 - i), state)
                if inner:
                    out = out + self.outer.apply(convolve(self.pole, KElement.pole(r, i + 1)), inner).scale(c)
        for t, kappa in self.outer.kernel_mono(mono).items():
            arg = convolve(self.pole_s, kappa) * f
            if arg:
                out = out - self.inner.apply_mono(arg, t)
        return out

    def _kernel_mono(self, mono) -> dict:
        out = {}
        for t, kappa in self.inner.kernel_mono(mono).items():
            for lam, beta, c in taylor_functionals(kappa):
                state = self.outer.apply_mono(convolve(self.pole, KElement.sing_basis(*beta)), t)
                _kstate_add_state(out, state, KElement.sing_basis(*lam, c))
        for t, kappa in self.outer.kernel_mono(mono).items():
            n_el = convolve(self.pole_s, kappa)
            for u, kap in self.inner.kernel_mono(t).items():
                _kstate_add(out, u, -(n_el * kap))
            for lam, beta, c in taylor_functionals(n_el):
                state = self.inner.apply_mono(KElement.sing_basis(*beta), t)
                _kstate_add_state(out, state, KElement.sing_basis(*lam, -c))
        return out


# basis indices -------------------------------------------------------------------------

def basis_element(f) -> KElement:
    """K-element from a basis index ('pol', l) -> tau(l), ('sing', n, k) -> 1/(x - n)^(k+1)."""
    if isinstance(f, KElement):
        return f
    if isinstance(f, tuple) and f and f[0] == "pol":
        return KElement.tau(f[1])
    if isinstance(f, tuple) and f and f[0] == "sing":
        return KElement.pole(f[1], f[2] + 1)
    raise MalformedInputError(f"not a component index: {f!r}")


def index_window(window: int = 4, max_order: int = 2) -> list:
    out = [("pol", l) for l in range(window + 1)]
    out += [("sing", n, k) for n in range(-window, window + 1) for k in range(max_order + 1)]
    return out


# standard examples ----------------------------------------------------------------------

def affine_abelian(generators=("X",), bound: int = 4) -> VertexAlgebra:
    return VertexAlgebra(abelian(generators), bound, "abelian")


def affine_sl2(bound: int = 4) -> VertexAlgebra:
    return VertexAlgebra(sl2(), bound, "sl2")


def vtoda(bound: int = 4) -> VertexAlgebra:
    return VertexAlgebra(ctoda(), bound, "vtoda")


VERTEX_ALGEBRAS = {"abelian": affine_abelian, "sl2": affine_sl2, "vtoda": vtoda}


def sample_states(v: VertexAlgebra, max_degree: int = 2, window: int = 1) -> list:
    """Vacuum, generator states and products of low-order creation symbols."""
    symbols = [(g, n, k) for g in v.generators for n in range(-window, window + 1) for k in range(2)]
    out = [v.vacuum()]
    out += [VertexState.monomial([s]) for s in symbols]
    if max_degree >= 2:
        base = [(g, n, 0) for g in v.generators for n in (0, 1)]
        for a, b in product(base, repeat=2):
            if a <= b:
                out.append(VertexState.monomial([a, b]))
    return out


# checks ------------------------------------------------------------------------------------

def _report(check, v, window, samples, violations):
    return {"check": check, "algebra": v.name, "window": window, "samples": samples,
            "violations": violations, "ok": not violations}


def vacuum_checks(v: VertexAlgebra, states=None, window: int = 4) -> dict:
    """Y(v0) is the identity; Y(f)v0 is holomorphic with constant term f."""
    states = states if states is not None else sample_states(v)
    indices = index_window(window)
    violations = []
    samples = 0
    identity = v.field(v.vacuum())
    for s in states:
        for idx in indices:
            samples += 1
            f = basis_element(idx)
            got = identity.apply(f, s)
            if got != s.scale(f.trace()):
                violations.append({"axiom": "identity-field", "state": repr(s), "index": idx})
        y = v.field(s)
        vac = v.vacuum()
        for l in range(window + 1):
            samples += 1
            if y.apply(("pol", l), vac):
                violations.append({"axiom": "holomorphic", "state": repr(s), "index": ("pol", l)})
        samples += 1
        if y.apply(KElement.pole(0, 1), vac) != s:
            violations.append({"axiom": "constant-term", "state": repr(s)})
    return _report("vacuum", v, window, samples, violations)


def skew_rhs(v: VertexAlgebra, f: VertexState, g: VertexState, big_f: KElement) -> VertexState:
    """Component at F of R_V(tau) Y^S(g, tau) f, where Y^S(g)_H = -Y(g)_{S(H)}."""
    yg = v.field(g)
    out = VertexState()
    for s_j, kappa in yg.pol_kernel(f).items():
        m = (big_f * kappa.antipode()).sing_part()
        if m:
            out = out + v.hat_action(alpha_inverse(m), VertexState({s_j: 1}))
    for (n, k), c in big_f.sing.items():
        r = -n
        for i in range(k + 1):
            inner = yg.apply(KElement.pole(r, k + 1 - i).antipode(), f)
            if inner:
                out = out - v.hat_action(HatHtElement.monomial(r, i), inner).scale(c)
    return out


def skew_check(v: VertexAlgebra, f: VertexState, g: VertexState, window: int = 4) -> dict:
    """Y(f)_F g equals the same component of R_V(tau) Y^S(g, tau) f on an index window."""
    yf = v.field(f)
    violations = []
    indices = index_window(window)
    for idx in indices:
        big_f = basis_element(idx)
        lhs = yf.apply(big_f, g)
        rhs = skew_rhs(v, f, g, big_f)
        if lhs != rhs:
            violations.append({"index": idx, "f": repr(f), "g": repr(g), "lhs": repr(lhs), "rhs": repr(rhs)})
    return _report("skew_symmetry", v, window, len(indices), violations)


def annihilator_roots(kernel: dict) -> dict:
    """Pole orders of all kernels: the product of (x - r)^d over them annihilates the commutator."""
    roots = {}
    for kappa in kernel.values():
        for (n, k) in kappa.sing:
            roots[-n] = max(roots.get(-n, 0), k + 1)
    return roots


def ope_rhs(v: VertexAlgebra, f: VertexState, g: VertexState, f1: KElement, f2: KElement,
            u: VertexState) -> VertexState:
    """sum_j Y(s_j)_{F2 (h_j F1)} u with (kappa_j, s_j) the kernel of Y(f) on g and h_j = alpha^-1(kappa_j)."""
    out = VertexState()
    for s_j, kappa in v.field(f).pol_kernel(g).items():
        arg = f2 * f1.act(alpha_inverse(kappa))
        if arg:
            out = out + v.field(s_j).apply(arg, u)
    return out


def ope_check(v: VertexAlgebra, f: VertexState, g: VertexState, states=None, window: int = 2) -> dict:
    """Borcherds commutator formula on sample states, plus a mutual-rationality certificate."""
    states = states if states is not None else sample_states(v, max_degree=1, window=1)
    indices = index_window(window, max_order=1)
    yf, yg = v.field(f), v.field(g)
    violations = []
    samples = 0
    for idx1, idx2 in product(indices, repeat=2):
        f1, f2 = basis_element(idx1), basis_element(idx2)
        for u in states:
            samples += 1
            try:
                lhs = yf.apply(f1, yg.apply(f2, u)) - yg.apply(f2, yf.apply(f1, u))
                rhs = ope_rhs(v, f, g, f1, f2, u)
            except BoundExceededError:
                continue
            if lhs != rhs:
                violations.append({"indices": (idx1, idx2), "state": repr(u),
                                   "lhs": repr(lhs), "rhs": repr(rhs)})
    kernel = v.field(f).pol_kernel(g)
    roots = annihilator_roots(kernel)
    for kappa in kernel.values():
        if not _annihilates(roots, kappa):
            violations.append({"property": "mutual-rationality", "kernel": repr(kappa)})
    report = _report("ope", v, window, samples, violations)
    report["annihilator"] = {str(r): d for r, d in sorted(roots.items())}
    return report


def _annihilates(roots: dict, kappa: KElement) -> bool:
    poly = Poly.from_roots([r for r, d in roots.items() for _ in range(d)])
    return not (KElement(poly) * kappa).sing


def normal_ordered_component(v: VertexAlgebra, f: VertexState, big_f, g: VertexState) -> VertexState:
    """The state f_{F} g = Y(f)_F g."""
    return v.field(f).apply(basis_element(big_f), g)


def normal_ordered_field(v: VertexAlgebra, g: str, pole_key, inner_state: VertexState) -> Field:
    """The field g(tau)_{G} Y(inner, tau) for a singular basis element G."""
    n, k = pole_key
    return LinearField([(c, NormalOrderedField(v, g, KElement.sing_basis(n, k), v.field(m)))
                        for m, c in inner_state.terms.items()])


def leibniz_check(v: VertexAlgebra, h: HtElement, f: VertexState, g: VertexState, window: int = 2) -> dict:
    """h(f_{F} g) = sum (h' f)_{F} (h'' g) over the coproduct of h."""
    violations = []
    indices = index_window(window, max_order=1)
    for idx in indices:
        big_f = basis_element(idx)
        lhs = v.hat_action(h, v.field(f).apply(big_f, g))
        rhs = VertexState()
        for (a, b), c in h.coproduct().terms.items():
            fa = v.hat_action(HtElement.monomial(a), f)
            gb = v.hat_action(HtElement.monomial(b), g)
            rhs = rhs + v.field(fa).apply(big_f, gb).scale(c)
        if lhs != rhs:
            violations.append({"index": idx, "lhs": repr(lhs), "rhs": repr(rhs)})
    return _report("leibniz", v, window, len(indices), violations)


def ad_covariance_check(v: VertexAlgebra, f: VertexState, states, window: int = 2) -> dict:
    """T Y(f)_F T^-1 = Y(T f)_F = Y(f)_{T^-1 F} on sample states."""
    violations = []
    samples = 0
    tee, tee_inv = HtElement.monomial(1), HtElement.monomial(-1)
    yf = v.field(f)
    ytf = v.field(v.hat_action(tee, f))
    for idx in index_window(window, max_order=1):
        big_f = basis_element(idx)
        for u in states:
            samples += 1
            conj = v.hat_action(tee, yf.apply(big_f, v.hat_action(tee_inv, u)))
            if conj != ytf.apply(big_f, u) or conj != yf.apply(big_f.shift(-1), u):
                violations.append({"index": idx, "state": repr(u)})
    return _report("ad_covariance", v, window, samples, violations)


def reorder_consistency(v: VertexAlgebra, symbols) -> bool:
    """Building a product by inserting symbols in two orders gives states related by brackets."""
    state_a = VertexState.vacuum()
    for s in reversed(symbols):
        state_a = v.create_state(s, state_a)
    # swap the first two factors and add back their commutator
    if len(symbols) < 2:
        return True
    s1, s2, rest = symbols[0], symbols[1], symbols[2:]
    base = VertexState.vacuum()
    for s in reversed(rest):
        base = v.create_state(s, base)
    state_b = v.create_state(s2, v.create_state(s1, base))
    for gamma, val in v.bracket(s1[0], KElement.sing_basis(*s1[1:]), s2[0], KElement.sing_basis(*s2[1:])):
        state_b = state_b + v.act(gamma, val, base)
    return state_a == state_b
