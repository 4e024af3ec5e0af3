"""The infinite Toda lattice: r-matrix brackets, Hamiltonians, Lax flows, simulation.

Symbolic part: the Lax operator L = A T + B + C T^-1 over the free
difference algebra in A, B, C.  Two-variable distributions are kept in the
normal form sum_k c_k(tau_2) T_2^k<delta>, i.e. the point configuration
x_1 = x_2 + k, with all field dependence moved to tau_2.

Numeric part: the same equations on a periodic ring Z/N, or the finite open
chain with indices 1..N.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diffalg import CoinvClass, DiffPoly, VHtOperator, evol_apply, var_derivative
from .errors import ConfigError, DivergenceError, HtAlgebraError

# Position of each generator in L = A T + B + C T^-1.
LAX_INDEX = {"A": 1, "B": 0, "C": -1}
INDEX_SYMBOL = {v: k for k, v in LAX_INDEX.items()}
GENERATORS = ("A", "B", "C")


class InternalConsistencyError(HtAlgebraError):
    """Two independent routes to the same quantity disagree."""


def lax_operator(a_value="symbolic") -> VHtOperator:
    """L = A T + B + C T^-1; ``a_value`` may freeze A to a constant."""
    if a_value == "symbolic":
        a = DiffPoly.gen("A")
    else:
        a = DiffPoly.const(Fraction(a_value))
    return VHtOperator({1: a, 0: DiffPoly.gen("B"), -1: DiffPoly.gen("C")})


def variables(a_value="symbolic"):
    return GENERATORS if a_value == "symbolic" else ("B", "C")


# two-variable normal form -------------------------------------------------------

def _nf_add(target: dict, key, k: int, c: DiffPoly):
    slot = target.setdefault(key, {})
    slot[k] = slot[k] + c if k in slot else c
    if not slot[k]:
        del slot[k]
    if not slot:
        del target[key]


def bracket_table() -> dict:
    """Fundamental brackets {v_a(tau_1), v_b(tau_2)} as {k: c_k} in the normal form.

    {B, C} = C (T_2^-1 - 1)<delta>, {C, B} = (1 - T_2)<C delta>; all others vanish.
    """
    c = DiffPoly.gen("C")
    table = {(a, b): {} for a in GENERATORS for b in GENERATORS}
    table[("B", "C")] = {-1: c, 0: -c}
    table[("C", "B")] = {0: c, 1: -c.shift(1)}
    return table


def table_as_operators() -> dict:
    return {key: VHtOperator(entry) for key, entry in bracket_table().items()}


def _sign(n: int) -> int:
    return 1 if n >= 0 else -1


def _lax_terms(a_value):
    return [(g, DiffPoly.gen(g) if g != "A" or a_value == "symbolic" else DiffPoly.const(Fraction(a_value)))
            for g in GENERATORS]


def lax_tensor_bracket(window: int = 3, a_value="symbolic") -> dict:
    """[L_2, r] - [L_1, r*] in the normal form, keyed by trailing powers (a, b) of T_1^a T_2^b.

    r = sum_al rho(T_2^-al) delta T_1^al and r* = sum_al rho(T_1^-al) delta T_2^al,
    with rho = Pi_{>=0} - Pi_{<0}.  Terms are generated for |al| <= window + 2
    so that every key with |a|, |b| <= window is complete.
    """
    out = {}
    span = window + 2
    lax = [(LAX_INDEX[g], coeff) for g, coeff in _lax_terms(a_value)]
    for al in range(-span, span + 1):
        s = _sign(-al)
        # r term: s * T_2^-al<delta> * T_1^al T_2^-al
        d_k, a, b = -al, al, -al
        for g, v in lax:
            # L_2 X: v(tau_2) T_2^g<D> ; X L_2: D * (T^b v)(tau_2)
            _nf_add(out, (a, b + g), d_k + g, v.scale(s))
            _nf_add(out, (a, b + g), d_k, -v.shift(b).scale(s))
        # r* term: s * T_1^-al<delta> * T_1^-al T_2^al, where T_1^-al<delta> = T_2^al<delta>
        d_k, a, b = al, -al, al
        for g, v in lax:
            # L_1 Y: v(tau_1) T_1^g<D> = (T^(d_k - g) v)(tau_2) T_2^(d_k - g)<delta>
            _nf_add(out, (a + g, b), d_k - g, -v.shift(d_k - g).scale(s))
            # Y L_1: D * (T^a v)(tau_1) = (T^(a + d_k) v)(tau_2) T_2^d_k<delta>
            _nf_add(out, (a + g, b), d_k, v.shift(a + d_k).scale(s))
    return {key: val for key, val in out.items() if abs(key[0]) <= window and abs(key[1]) <= window}


def r_commutator_check(window: int = 3, a_value="symbolic") -> dict:
    """Compare [L_2, r] - [L_1, r*] with the fundamental bracket table.

    Every key (a, b) = (index of v_a, index of v_b) in L must carry a fixed
    multiple of the table entry {v_a(tau_1), v_b(tau_2)} and all other keys
    must vanish.  The report gives that multiple.
    """
    computed = lax_tensor_bracket(window, a_value)
    table = bracket_table()
    ratio = None
    mismatches = []
    keys = {(a, b) for a in range(-window, window + 1) for b in range(-window, window + 1)}
    for key in sorted(keys):
        got = computed.get(key, {})
        if key[0] in INDEX_SYMBOL and key[1] in INDEX_SYMBOL:
            expected = table[(INDEX_SYMBOL[key[0]], INDEX_SYMBOL[key[1]])]
        else:
            expected = {}
        if a_value != "symbolic":
            expected = {k: v.substitute("A", DiffPoly.const(Fraction(a_value))) for k, v in expected.items()}
            expected = {k: v for k, v in expected.items() if v}
        if not expected:
            if got:
                mismatches.append({"key": key, "expected": "0", "got": _nf_repr(got)})
            continue
        k0 = next(iter(sorted(expected)))
        here = _ratio(got.get(k0, DiffPoly()), expected[k0])
        if ratio is None:
            ratio = here
        scaled = {k: v.scale(ratio) for k, v in expected.items()} if ratio is not None else None
        if here is None or here != ratio or scaled != got:
            mismatches.append({"key": key, "expected": _nf_repr(expected), "got": _nf_repr(got)})
    return {
        "check": "r_commutator",
        "window": window,
        "multiple_of_table": ratio,
        "bracket_normalization": None if not ratio else Fraction(1) / ratio,
        "violations": mismatches,
        "ok": not mismatches and ratio is not None,
    }


def _ratio(got: DiffPoly, expected: DiffPoly):
    if not got or not expected:
        return None
    mono, c = next(iter(sorted(expected.terms.items())))
    r = got.coeff(mono) / c
    return r if expected.scale(r) == got else None


def _nf_repr(entry: dict) -> str:
    return " + ".join(f"({v!r})·T2^{k}<δ>" for k, v in sorted(entry.items())) or "0"


# variational calculus on the Lax operator --------------------------------------

def delta_l(f: DiffPoly, a_value="symbolic") -> VHtOperator:
    """delta_L f = sum_al T^-al o (delta f / delta v_al), support in {-1, 0, 1}."""
    out = VHtOperator()
    for g in variables(a_value):
        al = LAX_INDEX[g]
        df = var_derivative(f, g)
        out = out + VHtOperator({-al: df.shift(-al)})
    return out


def hamiltonian_density(n: int, a_value="symbolic") -> DiffPoly:
    if n < 1:
        raise ValueError("Hamiltonians are indexed by n >= 1")
    return (lax_operator(a_value) ** n).sp().scale(Fraction(1, 2 * n))


def hamiltonian(n: int, a_value="symbolic") -> CoinvClass:
    """H_n = Sp(L^n / 2n) modulo total differences."""
    return CoinvClass(hamiltonian_density(n, a_value))


def rho(p: VHtOperator) -> VHtOperator:
    return p.project(">=", 0) - p.project("<", 0)


def rho_dual(p: VHtOperator) -> VHtOperator:
    return p.project("<=", 0) - p.project(">", 0)


def r_matrix_flow(delta: VHtOperator, a_value="symbolic") -> VHtOperator:
    """X_L = [L, rho(delta)] + rho*[L, delta]."""
    lax = lax_operator(a_value)
    return lax.commutator(rho(delta)) + rho_dual(lax.commutator(delta))


def lax_flow(n: int, a_value="symbolic") -> VHtOperator:
    """[L, Pi_{>=0}(L^(n-1))]."""
    lax = lax_operator(a_value)
    return lax.commutator((lax ** (n - 1)).project(">=", 0))


def _components(op: VHtOperator, a_value) -> dict:
    out = {g: op.coeff(LAX_INDEX[g]) for g in GENERATORS}
    if a_value != "symbolic":
        out["A"] = op.coeff(1)
    return out


def ham_flow(n: int, a_value="symbolic") -> dict:
    """Flow of H_n on the generators, computed by the r-matrix formula and by the Lax form."""
    delta = delta_l(hamiltonian_density(n, a_value), a_value)
    via_r = r_matrix_flow(delta, a_value)
    via_lax = lax_flow(n, a_value)
    if via_r != via_lax:
        raise InternalConsistencyError(f"flow formulas disagree for n = {n}")
    if any(k not in (-1, 0, 1) for k in via_r.support()):
        raise InternalConsistencyError("flow leaves the Lax support")
    return {"r_matrix": _components(via_r, a_value), "lax": _components(via_lax, a_value)}


def poisson_derivation(f: DiffPoly) -> dict:
    """X(f) from the fundamental brackets: X_B = (1-T)<C df/dC>, X_C = C (T^-1 - 1)<df/dB>."""
    c = DiffPoly.gen("C")
    df_b = var_derivative(f, "B")
    df_c = var_derivative(f, "C")
    return {
        "A": DiffPoly(),
        "B": c * df_c - (c * df_c).shift(1),
        "C": c * (df_b.shift(-1) - df_b),
    }


def flows_commute(m: int, n: int, a_value=1) -> bool:
    """[X_{H_m}, X_{H_n}] vanishes on every generator."""
    xm = ham_flow(m, a_value)["lax"]
    xn = ham_flow(n, a_value)["lax"]
    for g in variables(a_value):
        lhs = evol_apply(xm, xn[g]) - evol_apply(xn, xm[g])
        if not CoinvClass(lhs).is_zero() or lhs:
            return False
    return True


# three-variable normal form for the Jacobi identity -----------------------------

def _bracket_points(alpha, var_a, shift_a, beta, var_b, shift_b):
    """{v_alpha(x_a + s_a), v_beta(x_b + s_b)} as [(coefficient at x_b, offset of x_a from x_b)]."""
    out = []
    for k, c in bracket_table()[(alpha, beta)].items():
        out.append((c.shift(shift_b), shift_b + k - shift_a))
    return out


def _double_bracket(outer, left, right) -> dict:
    """{X(x_i), {Y(x_j), Z(x_k)}} normalized to base variable 3.

    Each argument is (symbol, variable, shift).  Result maps the offsets
    (x_1 - x_3, x_2 - x_3) to a coefficient in tau_3.
    """
    x_sym, i, sx = outer
    y_sym, j, sy = left
    z_sym, k, sz = right
    out = {}
    for c_m, off_j in _bracket_points(y_sym, j, sy, z_sym, k, sz):
        for (g, s) in sorted(c_m.generators()):
            partial = c_m.partial(g, s)
            for e_n, off_i in _bracket_points(x_sym, i, sx, g, k, s):
                coeff = partial * e_n
                offsets = {k: 0, j: off_j, i: off_i}
                base = offsets[3]
                coeff = coeff.shift(-base)
                key = (offsets[1] - base, offsets[2] - base)
                out[key] = out[key] + coeff if key in out else coeff
    return {key: v for key, v in out.items() if v}


def jacobi_check(shift_bound: int = 3) -> dict:
    """Cyclic sum of double brackets of generators vanishes for all shifts in the window."""
    violations = []
    count = 0
    shifts = range(-shift_bound, shift_bound + 1)
    for x in GENERATORS:
        for y in GENERATORS:
            for z in GENERATORS:
                for s1 in shifts:
                    for s2 in shifts:
                        for s3 in shifts:
                            a, b, c = (x, 1, s1), (y, 2, s2), (z, 3, s3)
                            total = {}
                            for term in (_double_bracket(a, b, c), _double_bracket(b, c, a), _double_bracket(c, a, b)):
                                for key, v in term.items():
                                    total[key] = total[key] + v if key in total else v
                            total = {key: v for key, v in total.items() if v}
                            count += 1
                            if total:
                                violations.append({"triple": (a, b, c), "residual": repr(total)})
    return {"check": "jacobi", "window": shift_bound, "samples": count,
            "violations": violations, "ok": not violations}


# numerics ---------------------------------------------------------------------------

@dataclass
class TodaStateNumeric:
    """B and C on N sites; open chains use indices 1..N with C_1 absent."""

    b: np.ndarray
    c: np.ndarray
    topology: str = "periodic"

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.topology not in ("periodic", "open"):
            raise ConfigError(f"unknown topology {self.topology!r}")
        if self.b.shape != self.c.shape or self.b.ndim != 1:
            raise ConfigError("B and C must be 1-d arrays of equal length")
        if self.b.size < 2:
            raise ConfigError("the lattice needs N >= 2 sites")
        if not (np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise ConfigError("state entries must be finite")
        if self.topology == "open":
            self.c = self.c.copy()
            self.c[0] = 0.0

    @property
    def n(self) -> int:
        return self.b.size

    @classmethod
    def random(cls, n: int, seed: int, topology: str = "periodic") -> "TodaStateNumeric":
        rng = np.random.default_rng(seed)
        return cls(rng.uniform(-1.0, 1.0, n), rng.uniform(0.5, 1.5, n), topology)


def _rhs(b, c, topology):
    if topology == "periodic":
        db = c - np.roll(c, -1)
        dc = c * (np.roll(b, 1) - b)
        return db, dc
    c_next = np.append(c[1:], 0.0)
    b_prev = np.insert(b[:-1], 0, 0.0)
    db = c - c_next
    dc = c * (b_prev - b)
    dc[0] = 0.0
    return db, dc


def numeric_rhs(state: TodaStateNumeric):
    """(dB/dt, dC/dt) for dB_i = C_i - C_{i+1}, dC_i = C_i (B_{i-1} - B_i)."""
    return _rhs(state.b, state.c, state.topology)


def rk4_step(state: TodaStateNumeric, dt: float) -> TodaStateNumeric:
    b, c, top = state.b, state.c, state.topology
    k1 = _rhs(b, c, top)
    k2 = _rhs(b + 0.5 * dt * k1[0], c + 0.5 * dt * k1[1], top)
    k3 = _rhs(b + 0.5 * dt * k2[0], c + 0.5 * dt * k2[1], top)
    k4 = _rhs(b + dt * k3[0], c + dt * k3[1], top)
    nb = b + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    nc = c + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    out = TodaStateNumeric.__new__(TodaStateNumeric)
    out.b, out.c, out.topology = nb, nc, top
    return out


def lax_matrix(state: TodaStateNumeric) -> np.ndarray:
    """B on the diagonal, 1 above it, C_i below it in row i; corners wrap when periodic."""
    n = state.n
    mat = np.diag(state.b.astype(float))
    for i in range(n - 1):
        mat[i, i + 1] += 1.0
        mat[i + 1, i] += state.c[i + 1]
    if state.topology == "periodic":
        mat[n - 1, 0] += 1.0
        mat[0, n - 1] += state.c[0]
    return mat


def conserved_traces(state: TodaStateNumeric, kmax: int) -> list:
    if kmax < 1:
        raise ConfigError("kmax must be >= 1")
    mat = lax_matrix(state)
    out = []
    power = np.eye(state.n)
    for _ in range(kmax):
        power = power @ mat
        out.append(float(np.trace(power)))
    return out


@dataclass
class Trajectory:
    times: np.ndarray
    b: np.ndarray
    c: np.ndarray
    traces: np.ndarray

    def max_relative_drift(self) -> list:
        """max_t |tr_k(t) - tr_k(0)| / max(|tr_k(0)|, 1) for each k."""
        base = self.traces[0]
        scale = np.maximum(np.abs(base), 1.0)
        return list(np.max(np.abs(self.traces - base), axis=0) / scale)

    def final_state(self, topology: str) -> TodaStateNumeric:
        return TodaStateNumeric(self.b[-1], self.c[-1], topology)


def simulate(state: TodaStateNumeric, dt: float, steps: int, kmax: int = 4,
             backward: bool = False, record_every: int = 1) -> Trajectory:
    """Fixed-step RK4; ``backward`` integrates toward negative time."""
    if not dt > 0:
        raise ConfigError("dt must be positive")
    if steps < 0:
        raise ConfigError("steps must be nonnegative")
    h = -dt if backward else dt
    times, bs, cs, trs = [0.0], [state.b.copy()], [state.c.copy()], [conserved_traces(state, kmax)]
    current = state
    with np.errstate(over="raise", invalid="raise"):
        for step in range(1, steps + 1):
            try:
                current = rk4_step(current, h)
                if not (np.all(np.isfinite(current.b)) and np.all(np.isfinite(current.c))):
                    raise DivergenceError("non-finite state", step)
                if step % record_every == 0 or step == steps:
                    traces = conserved_traces(current, kmax)
                    times.append(step * h)
                    bs.append(current.b.copy())
                    cs.append(current.c.copy())
                    trs.append(traces)
            except FloatingPointError as exc:
                raise DivergenceError("overflow in the trajectory", step) from exc
    return Trajectory(np.array(times), np.array(bs), np.array(cs), np.array(trs))
