from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from vgc import matrix_groups as mg
from vgc.exact_field import OMEGA


def _sub(defn, labels):
    return [defn.generator(lb) for lb in labels]


def test_rho_order(rho_table):
    assert rho_table.order == 24


def test_g216_order(g216_table):
    assert g216_table.order == 216


def test_identity_closure(rho_defn):
    ident = rho_defn.generators[0].identity()
    assert mg.closure([ident]).order == 1


def test_closure_cap_is_reported(g216_defn):
    with pytest.raises(mg.ClosureCapExceeded):
        g216_defn.closure(cap=50)


def test_closure_order_is_bfs(rho_table):
    lengths = [len(w) for w in rho_table.words]
    assert lengths == sorted(lengths)
    assert rho_table.elements[0] == rho_table.identity


def test_presentation_rho(rho_table, rho_defn):
    res = mg.verify_presentation(rho_table, mg.rho_assignment(rho_defn))
    assert res.ok and res.generates and not res.failures


def test_presentation_witness(rho_table, rho_defn):
    res = mg.verify_presentation(rho_table, mg.rho_assignment(rho_defn), ["sigma^3 = 1"])
    assert not res.ok
    (fail,) = res.failures
    assert fail["relation"] == "sigma^3 = 1"
    assert fail["lhs"] == str(rho_defn.generator("sigma"))


def test_presentation_unknown_symbol(rho_table, rho_defn):
    with pytest.raises(Exception, match="mu"):
        mg.verify_presentation(rho_table, mg.rho_assignment(rho_defn), ["mu^2 = 1"])


def test_presentation_g216_assignment(g216_table, g216_defn):
    assign = mg.g216_assignment(g216_defn)
    h1 = mg.subgroup_closure(g216_table, assign.values())
    assert h1.order == 24
    assert mg.verify_presentation(h1, assign).ok


def test_presentation_requires_generation(g216_table, g216_defn):
    # relations hold but four elements do not generate all of G
    res = mg.verify_presentation(g216_table, mg.g216_assignment(g216_defn))
    assert res.relations_hold and not res.generates and not res.ok


def test_subgroup_info_h2(g216_table, g216_defn):
    info = mg.subgroup_info(g216_table, _sub(g216_defn, ["D1", "D2"]))
    assert (info.order, info.index, info.normal) == (9, 24, True)


def test_subgroup_info_h3(g216_table, g216_defn):
    d1, d2 = g216_defn.generator("D1"), g216_defn.generator("D2")
    info = mg.subgroup_info(g216_table, [d1 * d2 * d2])
    assert info.order == 3 and info.normal


def test_subgroup_info_sigma(rho_table, rho_defn):
    info = mg.subgroup_info(rho_table, [rho_defn.generator("sigma")])
    assert (info.order, info.index, info.normal) == (2, 12, False)


def test_subgroup_info_rejects_foreign(rho_table, g216_defn):
    with pytest.raises(mg.NotInGroup):
        mg.subgroup_info(rho_table, [g216_defn.generator("D1")])


def test_semidirect_g216(g216_table, g216_defn):
    h1 = mg.subgroup_closure(g216_table, _sub(g216_defn, ["A", "B", "C1", "C2"]))
    h2 = mg.subgroup_closure(g216_table, _sub(g216_defn, ["D1", "D2"]))
    assert mg.semidirect_check(g216_table, h1, h2)
    assert not mg.semidirect_check(g216_table, h2, h1)


def test_semidirect_s4(rho_table, rho_defn):
    klein = mg.subgroup_closure(rho_table, _sub(rho_defn, ["lambda1", "lambda2"]))
    s3 = mg.subgroup_closure(rho_table, _sub(rho_defn, ["sigma", "tau"]))
    assert not mg.semidirect_check(rho_table, klein, s3)
    assert mg.semidirect_check(rho_table, s3, klein)


def test_semidirect_rejects_generator_lists(rho_table, rho_defn):
    with pytest.raises(Exception):
        mg.semidirect_check(rho_table, _sub(rho_defn, ["sigma"]), _sub(rho_defn, ["tau"]))


def test_class_sizes():
    assert sorted(mg.class_sizes(mg.alternating_group(5))) == [1, 12, 12, 15, 20]
    assert sorted(mg.class_sizes(mg.symmetric_group(4))) == [1, 3, 6, 6, 8]
    assert mg.class_sizes(mg.cyclic_group(1)) == [1]


def test_normal_subgroup_orders():
    assert mg.normal_subgroup_orders(mg.alternating_group(5)) == {1, 60}
    assert mg.normal_subgroup_orders(mg.symmetric_group(4)) == {1, 4, 12, 24}
    assert mg.normal_subgroup_orders(mg.cyclic_group(6)) == {1, 2, 3, 6}


def test_abelianization():
    assert mg.abelianization_order(mg.alternating_group(5)) == 1
    assert mg.abelianization_order(mg.symmetric_group(4)) == 2


def test_char_degree_multisets():
    assert mg.char_degree_multisets(60, 5, 1) == [(1, 3, 3, 4, 5)]
    assert mg.char_degree_multisets(24, 5, 2) == [(1, 1, 2, 3, 3)]
    assert mg.char_degree_multisets(1, 1, 1) == [(1,)]
    assert mg.char_degree_multisets(7, 2, 1) == []


def test_conjugation_transport(g216_table, rho_defn, g216_defn):
    rho = mg.rho_assignment(rho_defn)
    g = mg.g216_assignment(g216_defn)
    assignment = {k: (rho[k], g[k]) for k in rho}
    assert mg.conjugation_transport(g216_table, rho["tau"], assignment)
    assert not mg.conjugation_transport(g216_table, rho["tau"].identity(), assignment)
    assert not mg.conjugation_transport(g216_table, rho["sigma"], assignment)


def test_projective_normalization(g216_defn):
    d1 = g216_defn.generator("D1")
    scaled = mg.GroupElement(tuple(tuple(OMEGA * x for x in row) for row in d1.matrix), True)
    assert scaled == d1
    assert hash(scaled) == hash(d1)


def test_singular_matrix_rejected():
    with pytest.raises(mg.SingularMatrix):
        mg.GroupElement(((1, 0, 0), (0, 0, 0), (0, 0, 1)), False)


def test_malformed_fixture_reports_position():
    with pytest.raises(mg.FixtureError, match="line 2, column"):
        mg.parse_group_definition('{"name": "x",\n "projective": tru}')


def test_fixture_round_trip(g216_defn):
    again = mg.parse_group_definition(json.dumps(g216_defn.to_json()))
    assert again.generators == g216_defn.generators and again.labels == g216_defn.labels


def test_vgc_fixtures_env(tmp_path, monkeypatch, rho_defn):
    (tmp_path / "s4_rho.json").write_text(json.dumps(rho_defn.to_json()))
    monkeypatch.setenv("VGC_FIXTURES", str(tmp_path))
    assert mg.fixtures_path() == tmp_path
    assert mg.load_fixture_group("s4_rho").closure().order == 24


@given(st.permutations(range(4)))
def test_closure_generator_order_independent(rho_defn, rho_table, perm):
    gens = [rho_defn.generators[i] for i in perm]
    assert mg.closure(gens).element_set() == rho_table.element_set()


@given(st.lists(st.integers(0, 215), min_size=1, max_size=3))
def test_lagrange(g216_table, idx):
    info = mg.subgroup_info(g216_table, [g216_table.elements[i] for i in idx])
    assert g216_table.order % info.order == 0
    assert info.order * info.index == g216_table.order


@given(st.integers(0, 23), st.integers(0, 23), st.integers(0, 23))
def test_table_is_group(rho_table, i, j, k):
    a, b, c = (rho_table.elements[t] for t in (i, j, k))
    assert a * b in rho_table
    assert a.inverse() in rho_table
    assert (a * b) * c == a * (b * c)
