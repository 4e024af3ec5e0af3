import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import k_elements
from htalgebra import conformal as conf
from htalgebra import toda
from htalgebra.conformal import FreeHtModuleElement as M
from htalgebra.diffalg import DiffPoly, VHtOperator
from htalgebra.errors import MalformedInputError, UndefinedProductError
from htalgebra.localization import KElement


def test_toda_table_values():
    alg = conf.ctoda()
    assert alg.product("B", 0, "C") == M.gen("C", 0, -1)
    assert alg.product("B", -1, "C") == M.gen("C")
    assert alg.product("C", 0, "B") == M.gen("C")
    assert alg.product("C", 1, "B") == M.gen("C", 1, -1)
    assert alg.product("C", 0, "C") == M()
    assert alg.support("B", "C") == [-1, 0]


def test_covariance_reindexes_products():
    alg = conf.ctoda()
    assert alg.product(("B", 2), 1, "C") == alg.product("B", 3, "C")
    assert alg.product("B", 0, ("C", 1)) == alg.product("B", -1, "C").shift(1)


@pytest.mark.parametrize("factory", [conf.ctoda, conf.sl2, conf.abelian])
def test_axioms_hold_on_a_small_window(factory):
    report = conf.check_axioms(factory(), 1)
    assert report["ok"], report["violations"][:3]
    assert report["samples"] > 0


def test_toda_axioms_at_shift_bound_three():
    assert conf.check_axioms(conf.ctoda(), 3)["ok"]


def test_extra_entry_breaks_skew_symmetry():
    report = conf.check_axioms(conf.ctoda_typo(), 1)
    assert not report["ok"]
    assert any(v["axiom"] == "skew-symmetry" for v in report["violations"])


def test_sl2_bracket_matches_matrices():
    mats = {"e": np.array([[0, 1], [0, 0]]), "f": np.array([[0, 0], [1, 0]]), "h": np.array([[1, 0], [0, -1]])}
    for (x, y), value in conf.SL2_BRACKET.items():
        expected = mats[x] @ mats[y] - mats[y] @ mats[x]
        assert np.array_equal(sum(c * mats[z] for z, c in value.items()), expected)


def test_coinvariant_brackets():
    toda_bracket = conf.coinv_bracket(conf.ctoda())
    assert toda_bracket[("B", "C")] == {} and toda_bracket[("C", "B")] == {}
    sl2_bracket = conf.coinv_bracket(conf.sl2())
    for (x, y), value in conf.SL2_BRACKET.items():
        assert sl2_bracket[(x, y)] == value
    assert sl2_bracket[("e", "e")] == {}


def test_table_agrees_with_two_variable_bracket():
    # sum_n (x_n y) T^n is the operator of the bracket {x(tau_1), y(tau_2)}
    alg = conf.ctoda()
    ops = toda.table_as_operators()
    for a in alg.generators:
        for b in alg.generators:
            op = VHtOperator()
            for n in alg.support(a, b):
                for (g, q), c in alg.entry(a, b, n).items():
                    op = op + VHtOperator({n: DiffPoly.gen(g, q, c)})
            assert op == ops[(a, b)]


def test_unknown_generator():
    with pytest.raises(UndefinedProductError):
        conf.ctoda().product("Z", 0, "B")
    with pytest.raises(MalformedInputError):
        conf.ConformalAlgebra(("B",), {("B", "Q", 0): M.gen("B")})
    with pytest.raises(MalformedInputError):
        conf.get_algebra("nope")


def test_difference_basis_products():
    # -C + C T^-1 = -C Dbar, and Dbar is the basis element of index -1
    assert conf.delta_products(conf.ctoda(), "B", "C") == {-1: M.gen("C", 0, -1)}
    assert conf.current_commutator(conf.ctoda(), "B", "C") == conf.delta_products(conf.ctoda(), "B", "C")


def test_singular_vertex_operator():
    assert conf.ysing(conf.ctoda(), "B", "C") == {(0, 0): M.gen("C", 0, -1), (1, 0): M.gen("C")}
    assert conf.ysing_as_k(conf.ctoda(), "B", "C") == {("C", 0): KElement.sing_basis(1) - KElement.sing_basis(0)}


generator_names = st.sampled_from(["B", "C"])


@settings(max_examples=20)
@given(generator_names, k_elements, generator_names, k_elements)
def test_loop_bracket_routes_agree_and_are_antisymmetric(a, p, b, q):
    alg = conf.ctoda()
    u, v = conf.LCElement.of(a, p), conf.LCElement.of(b, q)
    bracket = conf.lc_bracket(alg, u, v)
    assert bracket == conf.lc_bracket_shift_form(alg, u, v)
    assert bracket == -conf.lc_bracket(alg, v, u)


@settings(max_examples=20)
@given(st.sampled_from(["e", "f", "h"]), k_elements, st.sampled_from(["e", "f", "h"]), k_elements)
def test_loop_bracket_of_currents_multiplies_arguments(a, p, b, q):
    got = conf.lc_bracket(conf.sl2(), conf.LCElement.of(a, p), conf.LCElement.of(b, q))
    expected = conf.LCElement({z: (p * q).scale(c) for z, c in conf.SL2_BRACKET.get((a, b), {}).items()})
    assert got == expected


def test_loop_element_absorbs_shifts():
    p = KElement.tau(2)
    assert conf.LCElement.of(M.gen("B", 3), p) == conf.LCElement.of("B", p.shift(-3))


def test_derived_bracket_operator_on_generators_and_products():
    table = toda.table_as_operators()
    b, c = DiffPoly.gen("B"), DiffPoly.gen("C")
    assert conf.derived_bracket_operator(table, b, c) == table[("B", "C")]
    # the bracket is a derivation in the second slot
    lhs = conf.derived_bracket_operator(table, b, c * c)
    assert lhs == VHtOperator.multiplication(c.scale(2)) * table[("B", "C")]


def test_vertex_poisson_structure():
    report = conf.vertex_poisson_check(toda.table_as_operators(), toda.GENERATORS, 2)
    assert report["ok"], report["violations"][:3]


def test_vertex_poisson_detects_broken_skew():
    table = dict(toda.table_as_operators())
    table[("C", "C")] = VHtOperator.multiplication(DiffPoly.gen("C"))
    assert not conf.vertex_poisson_check(table, ("B", "C"), 1)["ok"]


def test_json_round_trip(tmp_path):
    alg = conf.ctoda()
    path = tmp_path / "toda.json"
    path.write_text(json.dumps(conf.algebra_to_json(alg)))
    loaded = conf.load_algebra(str(path))
    assert loaded.table == alg.table
    assert loaded.generators == alg.generators


def test_json_loader_reads_documented_format():
    text = json.dumps({"generators": ["B", "C"], "table": [
        {"lhs": ["B", "C"], "n": 0, "rhs": [[-1, "C", 0]]},
        {"lhs": ["B", "C"], "n": -1, "rhs": [[1, "C", 0]]},
        {"lhs": ["C", "B"], "n": 0, "rhs": [[1, "C", 0]]},
        {"lhs": ["C", "B"], "n": 1, "rhs": [["-1", "C", 1]]},
    ]})
    assert conf.algebra_from_json(text).table == conf.ctoda().table


@pytest.mark.parametrize("bad", [
    {"table": []},
    {"generators": ["B"], "table": [{"lhs": ["B", "B"], "n": 0.5, "rhs": []}]},
    {"generators": ["B"], "table": [{"lhs": ["B", "B"], "n": True, "rhs": []}]},
    {"generators": ["B"], "table": [{"lhs": ["B", "B"], "n": 0, "rhs": [[1, "B", "x"]]}]},
    {"generators": ["B"], "table": [{"lhs": ["B", "Z"], "n": 0, "rhs": [[1, "B", 0]]}]},
    {"generators": ["B"], "table": [{"lhs": ["B"], "n": 0, "rhs": []}]},
])
def test_json_loader_rejects_malformed_input(bad):
    with pytest.raises(MalformedInputError):
        conf.algebra_from_json(bad)


def test_json_loader_accepts_inconsistent_tables():
    # B_0 B = B is well formed but violates skew-symmetry
    alg = conf.algebra_from_json({"generators": ["B"], "table": [{"lhs": ["B", "B"], "n": 0, "rhs": [[1, "B", 0]]}]})
    assert not conf.check_axioms(alg, 1)["ok"]
