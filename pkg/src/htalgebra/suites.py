"""Identity suites run by the command line front end.

Each suite returns a report {"suite", "window", "seed", "checks": [...], "ok"}
where every check is {"name", "ok", "samples", "violations"}.
"""
from __future__ import annotations

import random
from fractions import Fraction

from . import conformal as conf
from . import distributions as dist
from . import toda, vertex
from .hopf import HatHtElement, HtElement, check_hopf_axioms
from .localization import KElement, RationalForm, k_normalize
from .sequences import CzpolElement, derivative_by_dbar_series

# random inputs -------------------------------------------------------------------


def _frac(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 3))


def random_ht(rng: random.Random, span: int = 6, terms: int = 3) -> HtElement:
    return HtElement({rng.randint(-span, span): _frac(rng) for _ in range(terms)})


def random_hat(rng: random.Random, span: int = 3, order: int = 2, terms: int = 3) -> HatHtElement:
    return HatHtElement({(rng.randint(-span, span), rng.randint(0, order)): _frac(rng) for _ in range(terms)})


def random_czpol(rng: random.Random, degree: int = 4, terms: int = 3) -> CzpolElement:
    return CzpolElement({rng.randint(0, degree): _frac(rng) for _ in range(terms)})


def random_sing(rng: random.Random, span: int = 3, order: int = 2, terms: int = 3) -> KElement:
    return KElement(sing={(rng.randint(-span, span), rng.randint(0, order)): _frac(rng) for _ in range(terms)})


def random_k(rng: random.Random, degree: int = 3) -> KElement:
    return KElement(random_czpol(rng, degree, 2)) + random_sing(rng)


def random_rational_form(rng: random.Random, max_roots: int = 4, max_mult: int = 3, degree: int = 6) -> RationalForm:
    roots = {}
    for _ in range(rng.randint(1, max_roots)):
        roots[rng.randint(-6, 6)] = rng.randint(1, max_mult)
    num = CzpolElement({l: _frac(rng) for l in range(rng.randint(0, degree) + 1)})
    return RationalForm(num, roots)


# helpers ---------------------------------------------------------------------------------

def _check(name: str, results) -> dict:
    """results: iterable of (ok, detail)."""
    violations = []
    samples = 0
    for ok, detail in results:
        samples += 1
        if not ok:
            violations.append(detail)
    return {"name": name, "ok": not violations, "samples": samples, "violations": violations[:20]}


def _from_report(name: str, report: dict) -> dict:
    return {"name": name, "ok": report["ok"], "samples": report.get("samples", 0),
            "violations": report["violations"][:20]}


# suites ----------------------------------------------------------------------------------

def suite_hopf(window: int, rng: random.Random, **_) -> list:
    elems = [random_ht(rng, window) for _ in range(20)]
    hats = [random_hat(rng) for _ in range(20)]
    return [
        _check("hopf axioms", ((check_hopf_axioms(h), repr(h)) for h in elems)),
        _check("difference basis round trip",
               ((HtElement.from_delta_basis(h.to_delta_basis()) == h, repr(h)) for h in elems)),
        _check("counit is multiplicative",
               (((a * b).counit() == a.counit() * b.counit(), repr((a, b))) for a, b in zip(elems, elems[1:]))),
        _check("antipode is an involution", ((h.antipode().antipode() == h, repr(h)) for h in elems + hats)),
        _check("antipode is an anti-homomorphism on the extension",
               (((a * b).antipode() == b.antipode() * a.antipode(), repr((a, b))) for a, b in zip(hats, hats[1:]))),
        _check("twisted coproduct is the function f(m - n)", _twisted_coproduct_samples(rng, window)),
    ]


def _twisted_coproduct_samples(rng, window):
    for _ in range(10):
        f = random_czpol(rng)
        pieces = dist.twisted_coproduct_poly(f)
        for m in range(-window, window + 1):
            for n in range(-window, window + 1):
                yield pieces.evaluate((m, n)) == f(m - n), (repr(f), m, n)


def suite_sequences(window: int, rng: random.Random, **_) -> list:
    pairs = [(random_czpol(rng, 6), random_czpol(rng, 6)) for _ in range(30)]
    points = range(-window, window + 1)

    def products():
        for f, g in pairs:
            fg = f * g
            yield all(fg(n) == f(n) * g(n) for n in points), repr((f, g))

    def shifts():
        for f, _ in pairs:
            h = random_ht(rng, 3)
            lhs = f.act(h)
            yield all(lhs(n) == sum(c * f(n + m) for m, c in h.items()) for n in points), repr((f, h))

    def duality():
        for k in range(window + 1):
            for l in range(window + 1):
                value = CzpolElement.tau(l).pairing(HtElement.delta_basis(k))
                yield value == (1 if k == l else 0), (k, l)

    def derivative_series():
        for f, _ in pairs:
            yield f.derivative() == derivative_by_dbar_series(f), repr(f)

    def antipode():
        for f, _ in pairs:
            sf = f.antipode()
            yield all(sf(n) == f(-n) for n in points), repr(f)

    return [
        _check("pointwise products", products()),
        _check("shift action", shifts()),
        _check("difference basis duality", duality()),
        _check("log series for the derivative", derivative_series()),
        _check("antipode reflects the argument", antipode()),
        _check("derivative of tau(1) is tau(0)",
               [(CzpolElement.tau(1).derivative() == CzpolElement.tau(0), "tau(1)")]),
    ]


def suite_localization(window: int, rng: random.Random, **_) -> list:
    def orthogonality():
        for m in range(-window, window + 1):
            for n in range(-window, window + 1):
                tr = (KElement.tau(m) * KElement.tau(n)).trace()
                yield tr == (1 if m == -n - 1 else 0), (m, n)

    def round_trip():
        for _ in range(50):
            form = random_rational_form(rng)
            f = k_normalize(form)
            pts = [x for x in range(-20, 21) if x not in form.roots][:window * 4]
            yield all(f(x) == form.evaluate(x) for x in pts), repr(form.roots)

    def translation():
        for _ in range(30):
            f = random_sing(rng)
            m = rng.randint(-window, window)
            yield f.shift(m).trace() == f.trace(), repr(f)

    def partial_summation():
        for _ in range(30):
            h, f, g = random_hat(rng), random_k(rng), random_k(rng)
            yield dist.check_partial_summation(h, f, g), repr((h, f, g))

    def products():
        for _ in range(30):
            f, g = random_k(rng), random_k(rng)
            pts = [x for x in range(-12, 13) if x not in f.roots() and x not in g.roots()]
            fg = f * g
            yield all(fg(x) == f(x) * g(x) for x in pts), repr((f, g))

    return [
        _check("orthogonality", orthogonality()),
        _check("normalization round trip", round_trip()),
        _check("trace is translation invariant", translation()),
        _check("partial summation", partial_summation()),
        _check("products agree pointwise", products()),
    ]


def suite_distributions(window: int, rng: random.Random, **_) -> list:
    indices = dist.basis_window(min(window, 6), 2)

    def dirac():
        for _ in range(10):
            kernel = random_k(rng)
            d = dist.Distribution1.from_kernel(kernel)
            for var in (1, 2):
                traced = dist.distr_trace_in(d, dist.dirac_delta(), var)
                yield traced.agrees_with(d, indices), (repr(kernel), var)

    def rho_lambda():
        for _ in range(5):
            kernel = random_k(rng)
            d = dist.Distribution1.from_kernel(kernel)
            hol, sing = d.hol_part(), d.sing_part()
            table = [
                (dist.rho(), 1, hol, 1), (dist.rho(), 2, sing, 1),
                (dist.lam(), 1, sing, -1), (dist.lam(), 2, hol, -1),
            ]
            for kern, var, expected, sign in table:
                traced = dist.distr_trace_in(d, kern, var)
                ok = all(traced.component(b) == sign * expected.component(b) for b in indices)
                yield ok, (repr(kernel), kern.kind, var)

    def exponentials():
        for _ in range(5):
            for v in (random_czpol(rng), random_sing(rng)):
                yield not dist.check_inverse_exponentials(v, "delta", window), ("inverse", repr(v))
                yield not dist.check_inverse_exponentials(v, "ht", min(window, 4)), ("inverse-ht", repr(v))
        for _ in range(5):
            f, g = random_czpol(rng, 3), random_czpol(rng, 3)
            yield not dist.check_multiplicativity(f, g, "delta", window), ("mult", repr((f, g)))
            yield not dist.check_multiplicativity(f, g, "delta", window, twisted=True), ("mult-S", repr((f, g)))
            yield not dist.check_multiplicativity(f, g, "ht", min(window, 4)), ("mult-ht", repr((f, g)))
            p, q = random_sing(rng, 2, 1, 2), random_sing(rng, 2, 1, 2)
            yield not dist.check_multiplicativity(p, q, "delta", window), ("mult-sing", repr((p, q)))

    def adjoint():
        for _ in range(5):
            mult = random_k(rng)
            v = random_czpol(rng)
            x_map = lambda w, mult=mult: w * KElement(mult.poly)
            yield not dist.check_adjoint_action(x_map, v, "delta", window), repr((mult, v))

    def multivariable():
        for l in range(window + 1):
            yield dist.multivariable_identity(l), l

    return [
        _check("delta reproduces components", dirac()),
        _check("rho and lambda split into parts", rho_lambda()),
        _check("exponential identities", exponentials()),
        _check("adjoint action", adjoint()),
        _check("multivariable difference identity", multivariable()),
    ]


def suite_conformal(window: int, rng: random.Random, algebra: str = "ctoda", algebra_file: str = None, **_) -> list:
    alg = conf.load_algebra(algebra_file) if algebra_file else conf.get_algebra(algebra)
    checks = [_from_report("axioms", conf.check_axioms(alg, min(window, 3)))]
    bracket = conf.coinv_bracket(alg)
    checks.append(_check("coinvariant bracket is antisymmetric",
                         ((bracket[(a, b)] == {g: -c for g, c in bracket[(b, a)].items()}, (a, b))
                          for a in alg.generators for b in alg.generators)))

    def lc_routes():
        for _ in range(10):
            u = conf.LCElement.of(rng.choice(alg.generators), random_k(rng, 2))
            v = conf.LCElement.of(rng.choice(alg.generators), random_k(rng, 2))
            a = conf.lc_bracket(alg, u, v)
            ok = a == conf.lc_bracket_shift_form(alg, u, v) and a == -conf.lc_bracket(alg, v, u)
            yield ok, repr((u, v))

    checks.append(_check("loop bracket: difference and shift forms agree, antisymmetric", lc_routes()))
    return checks


def suite_toda_symbolic(window: int, rng: random.Random, **_) -> list:
    w = min(window, 3)
    r_report = toda.r_commutator_check(w)

    def flows():
        for n in range(1, 5):
            for a_value in ("symbolic", 1):
                try:
                    toda.ham_flow(n, a_value)
                    yield True, (n, a_value)
                except toda.InternalConsistencyError as exc:
                    yield False, (n, a_value, str(exc))

    return [
        {"name": "r-matrix commutator", "ok": r_report["ok"], "samples": 1,
         "violations": r_report["violations"][:20],
         "multiple_of_table": str(r_report["multiple_of_table"])},
        _check("dual flow formulas agree", flows()),
        _from_report("jacobi", toda.jacobi_check(w)),
        _check("flows commute", [(toda.flows_commute(2, 3), (2, 3))]),
        _from_report("vertex-Poisson skew and covariance",
                     conf.vertex_poisson_check(toda.table_as_operators(), toda.GENERATORS, w)),
    ]


def suite_vertex(window: int, rng: random.Random, **_) -> list:
    w = min(window, 2)
    checks = []
    for name, factory in vertex.VERTEX_ALGEBRAS.items():
        v = factory()
        checks.append(_from_report(f"{name}: vacuum", vertex.vacuum_checks(v, window=w)))
        gens = [v.generator_state(g) for g in v.generators]
        skew = [vertex.skew_check(v, f, g, w) for f in gens for g in gens]
        checks.append({"name": f"{name}: skew-symmetry", "ok": all(r["ok"] for r in skew),
                       "samples": len(skew), "violations": [x for r in skew for x in r["violations"]][:20]})
        ope = [vertex.ope_check(v, f, g, window=1) for f in gens for g in gens]
        checks.append({"name": f"{name}: commutator formula", "ok": all(r["ok"] for r in ope),
                       "samples": len(ope), "violations": [x for r in ope for x in r["violations"]][:20]})
    return checks


SUITES = {
    "hopf": suite_hopf,
    "sequences": suite_sequences,
    "localization": suite_localization,
    "distributions": suite_distributions,
    "conformal": suite_conformal,
    "toda-symbolic": suite_toda_symbolic,
    "vertex": suite_vertex,
}


def run_suite(name: str, window: int = 4, seed: int = 0, **options) -> dict:
    if name not in SUITES:
        raise KeyError(name)
    rng = random.Random(seed)
    checks = SUITES[name](window, rng, **options)
    return {"suite": name, "window": window, "seed": seed, "checks": checks,
            "ok": all(c["ok"] for c in checks)}
