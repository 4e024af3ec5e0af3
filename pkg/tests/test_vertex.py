import pytest

from htalgebra import vertex as V
from htalgebra.errors import BoundExceededError, MalformedInputError
from htalgebra.hopf import HatHtElement, HtElement
from htalgebra.localization import KElement
from htalgebra.vertex import VertexState

ONE_OVER_X = KElement.sing_basis(0)


@pytest.fixture(scope="module")
def toda_va():
    return V.vtoda()


@pytest.fixture(scope="module")
def sl2_va():
    return V.affine_sl2()


def test_toda_commutator_instance(toda_va):
    # [B_{tau(1)}, C_{1/tau}] v0 with B_{tau(1)} v0 = 0
    vac = toda_va.vacuum()
    lhs = toda_va.act("B", KElement.tau(1), toda_va.act("C", ONE_OVER_X, vac)) \
        - toda_va.act("C", ONE_OVER_X, toda_va.act("B", KElement.tau(1), vac))
    assert lhs == -toda_va.generator_state("C")


def test_annihilators_kill_the_vacuum(toda_va):
    for g in toda_va.generators:
        for l in range(4):
            assert not toda_va.act(g, KElement.tau(l), toda_va.vacuum())


def test_loop_bracket_from_conformal_products(sl2_va):
    # [e_p, f_q] = h_{pq} in the current algebra
    p, q = KElement.pole(1), KElement.tau(2)
    assert sl2_va.bracket("e", p, "f", q) == [("h", p * q)]


def test_creation_reorders_with_brackets(sl2_va):
    vac = sl2_va.vacuum()
    ef = sl2_va.act("e", ONE_OVER_X, sl2_va.act("f", ONE_OVER_X, vac))
    fe = sl2_va.act("f", ONE_OVER_X, sl2_va.act("e", ONE_OVER_X, vac))
    # [e_{1/x}, f_{1/x}] = h_{1/x^2}
    assert ef - fe == VertexState.monomial([("h", 0, 1)])


def test_abelian_modes_commute():
    v = V.affine_abelian(("X", "Y"))
    vac = v.vacuum()
    p, q = KElement.pole(2), KElement.pole(-1, 2)
    assert v.act("X", p, v.act("Y", q, vac)) == v.act("Y", q, v.act("X", p, vac))


@pytest.mark.parametrize("symbols", [
    [("B", 0, 0), ("C", 1, 0)],
    [("C", 0, 1), ("B", -1, 0), ("C", 0, 0)],
    [("C", 2, 0), ("B", 0, 0)],
])
def test_reordering_is_consistent(toda_va, symbols):
    assert V.reorder_consistency(toda_va, symbols)


def test_degree_bound():
    v = V.vtoda(bound=2)
    state = VertexState.monomial([("B", 0, 0), ("B", 1, 0)])
    with pytest.raises(BoundExceededError):
        v.act("B", KElement.pole(2), state)


def test_unknown_generator(toda_va):
    with pytest.raises(MalformedInputError):
        toda_va.generator_state("Z")
    with pytest.raises(MalformedInputError):
        V.basis_element(("bogus", 1))


def test_shift_action_moves_poles(toda_va):
    state = toda_va.generator_state("B")
    # h.g_p = g_{S(h) p}: T sends 1/x to 1/(x-1), dtau sends 1/x to 1/x^2
    assert toda_va.hat_action(HtElement.monomial(1), state) == VertexState.monomial([("B", -1, 0)])
    assert toda_va.hat_action(HatHtElement.dtau(), state) == VertexState.monomial([("B", 0, 1)])
    assert toda_va.hat_action(HatHtElement.dtau(), toda_va.vacuum()) == VertexState()


def test_generator_field_is_the_loop_action(toda_va):
    state = VertexState.monomial([("C", 1, 0)])
    for idx in V.index_window(2, 1):
        f = V.basis_element(idx)
        assert toda_va.field(toda_va.generator_state("B")).apply(f, state) == toda_va.act("B", f, state)


def test_field_of_a_product_state_creates_it(toda_va):
    state = VertexState.monomial([("B", 0, 0), ("C", 1, 0)])
    assert toda_va.field(state).apply(KElement.pole(0), toda_va.vacuum()) == state
    assert V.normal_ordered_component(toda_va, state, ("sing", 0, 0), toda_va.vacuum()) == state


def test_polynomial_kernel_reproduces_components(toda_va):
    field = toda_va.field(toda_va.generator_state("B"))
    target = VertexState.monomial([("C", 0, 0), ("C", 1, 0)])
    kernel = field.pol_kernel(target)
    for l in range(5):
        expected = VertexState()
        for mono, kappa in kernel.items():
            expected = expected + VertexState({mono: (KElement.tau(l) * kappa).trace()})
        assert field.apply(KElement.tau(l), target) == expected


@pytest.mark.parametrize("name", sorted(V.VERTEX_ALGEBRAS))
def test_vacuum_axioms(name):
    v = V.VERTEX_ALGEBRAS[name]()
    assert V.vacuum_checks(v, window=2)["ok"]


@pytest.mark.parametrize("name", sorted(V.VERTEX_ALGEBRAS))
def test_skew_symmetry_on_generators(name):
    v = V.VERTEX_ALGEBRAS[name]()
    gens = [v.generator_state(g) for g in v.generators]
    for f in gens:
        for g in gens:
            report = V.skew_check(v, f, g, 2)
            assert report["ok"], report["violations"][:2]


def test_skew_symmetry_on_a_product_state(toda_va):
    f = VertexState.monomial([("B", 0, 0), ("C", 0, 0)])
    assert V.skew_check(toda_va, f, toda_va.generator_state("C"), 2)["ok"]
    assert V.skew_check(toda_va, toda_va.generator_state("B"), f, 2)["ok"]


@pytest.mark.parametrize("name", ["abelian", "vtoda"])
def test_commutator_formula_on_generators(name):
    v = V.VERTEX_ALGEBRAS[name]()
    gens = [v.generator_state(g) for g in v.generators]
    for f in gens:
        for g in gens:
            report = V.ope_check(v, f, g, window=1)
            assert report["ok"], report["violations"][:2]


def test_commutator_formula_annihilator(toda_va):
    report = V.ope_check(toda_va, toda_va.generator_state("B"), toda_va.generator_state("C"), window=1)
    # B_P C_{1/x} v0 = (P(-1) - P(0)) C_{1/x} v0, so the kernel is 1/(x+1) - 1/x
    assert report["annihilator"] == {"-1": 1, "0": 1}
    kernel = toda_va.field(toda_va.generator_state("B")).pol_kernel(toda_va.generator_state("C"))
    assert kernel == {(("C", 0, 0),): KElement.sing_basis(1) - KElement.sing_basis(0)}


def test_commutator_formula_detects_a_wrong_right_side(toda_va, monkeypatch):
    monkeypatch.setattr(V, "ope_rhs", lambda *args: VertexState())
    f, g = toda_va.generator_state("B"), toda_va.generator_state("C")
    assert not V.ope_check(toda_va, f, g, window=1)["ok"]


def test_leibniz_rule(toda_va):
    f, g = toda_va.generator_state("B"), VertexState.monomial([("C", 1, 0)])
    assert V.leibniz_check(toda_va, HtElement.monomial(1), f, g)["ok"]
    assert V.leibniz_check(toda_va, HtElement.delta_basis(2), f, g)["ok"]


def test_shift_covariance_of_fields(toda_va):
    states = V.sample_states(toda_va, max_degree=1, window=0)
    assert V.ad_covariance_check(toda_va, toda_va.generator_state("C"), states)["ok"]


def test_state_formatting():
    assert repr(VertexState.vacuum()) == "v0"
    assert repr(VertexState.monomial([("B", 0, 0), ("C", -1, 1)])) == "B_{1/x}·C_{1/(x-1)^2}·v0"
    assert V.format_symbol(2, 0) == "1/(x+2)"
