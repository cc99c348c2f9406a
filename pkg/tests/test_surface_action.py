from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vgc import matrix_groups as mg
from vgc import surface_action as sa
from vgc.exact_field import OMEGA, CycNum


def test_lambda1_on_diagonal(maps, points):
    assert sa.act(maps["lambda1"], sa.ProjPoint.affine(1, 1, 1)) == points["R14"]


def test_identity_action(maps, points):
    ident = maps["sigma"].identity()
    for p in points.values():
        assert sa.act(ident, p) == p


def test_tau_moves_p1_to_p2(maps, points):
    assert points["P1"] == sa.ProjPoint([[0, 1], [1, 0], [0, 1]])
    assert sa.act(maps["tau"], points["P1"]) == sa.ProjPoint([[1, 0], [0, 1], [0, 1]]) == points["P2"]


def test_affine_formulas(maps):
    x, y, z = (CycNum.coerce(v) for v in (2, 5, Fraction(1, 10)))
    assert maps["sigma"].apply_affine([x, y, z]) == [y, x, z]
    assert maps["lambda1"].apply_affine([x, y, z]) == [-x, y, -z]
    assert maps["lambda2"].apply_affine([x, y, z]) == [-x, -y, z]


def test_dimension_mismatch(maps):
    with pytest.raises(sa.DimensionMismatch):
        sa.act(maps["sigma"], sa.ProjPoint.plane(1, 2, 3))


def test_matrix_acts_on_plane(rho_defn):
    p = sa.ProjPoint.plane(1, 2, 3)
    assert sa.act(rho_defn.generator("sigma"), p) == sa.ProjPoint.plane(2, 1, 3)


def test_surface_invariance(maps):
    res = sa.surface_invariance([maps[k] for k in ("sigma", "tau", "lambda1", "lambda2")])
    assert res.invariant and all(s == 1 for s in res.scalars)
    assert not sa.surface_invariance([sa.SignedMonomialMap((0, 1, 2), (-1, 1, 1))]).invariant
    ident = maps["sigma"].identity()
    assert sa.surface_invariance([ident]).scalars == [1]


def test_all_24_preserve_surface(action_table):
    assert action_table.order == 24
    assert all(s == 1 for s in sa.surface_invariance(action_table.elements).scalars)


def test_orbit_examples(action_table, points):
    orb = sa.orbit(sa.ProjPoint.affine(1, 1, 1), action_table)
    assert set(orb) == {points[f"R1{j}"] for j in range(1, 5)}
    assert set(sa.orbit(points["P1"], action_table)) == {points[f"P{j}"] for j in range(1, 4)}
    assert len(sa.orbit(sa.ProjPoint.affine(2, 3, Fraction(1, 6)), action_table)) == 24


def test_stabilizer_examples(action_table, points, maps):
    stab = sa.stabilizer(sa.ProjPoint.affine(1, 1, 1), action_table)
    assert stab.order == 6
    assert stab.element_set() == mg.closure([maps["sigma"], maps["tau"]]).element_set()
    assert sa.stabilizer(points["P1"], action_table).order == 8
    assert sa.stabilizer(sa.ProjPoint.affine(2, 3, Fraction(1, 6)), action_table).order == 1


def test_orbit_rejects_off_surface(action_table):
    with pytest.raises(sa.OffSurface):
        sa.orbit(sa.ProjPoint.affine(1, 2, 3), action_table)


def test_zero_factor_rejected():
    with pytest.raises(ValueError):
        sa.ProjPoint([[0, 0], [1, 0], [0, 1]])


def test_klein_product_has_no_affine_fixed_points(maps):
    g = maps["lambda1"] * maps["lambda2"]
    assert g.apply_affine([CycNum.coerce(v) for v in (1, 2, 3)]) == [1, -2, -3]
    for comp in sa.fixed_locus(g):
        if comp.kind == "point":
            assert comp.point.on_boundary()
        else:
            assert comp.kind == "curve"
            for p in comp.sample_points(random.Random(0), 5):
                assert p.on_boundary()


def test_tau_fixed_points_avoid_boundary(maps):
    comps = sa.fixed_locus(maps["tau"])
    assert [c.kind for c in comps] == ["point"] * 3
    assert {c.point for c in comps} == {sa.ProjPoint.affine(w, w, w) for w in (1, OMEGA, OMEGA**2)}
    assert not any(c.point.on_boundary() for c in comps)


def test_identity_fixed_locus_is_all(maps):
    (comp,) = sa.fixed_locus(maps["sigma"].identity())
    assert comp.kind == "all"


def test_classification_bound_6(classification, points, rho_defn):
    assert classification.num_points == 18
    assert sorted(classification.sizes) == [3, 3, 4, 4, 4]
    assert not classification.positive_dimensional
    names = {o.name: sorted(o.labels) for o in classification.orbits}
    assert names == {k: sorted(v) for k, v in sa.published_orbits().items()}
    for o in classification.orbits:
        for lb, p in zip(o.labels, o.points):
            assert points[lb] == p
        assert o.size * o.stabilizer_order == 24


def test_classification_bound_3(action_table):
    assert sa.classify_small_orbits(action_table, 3).orbits == []


def test_classification_trivial_group(maps):
    trivial = mg.closure([maps["sigma"].identity()])
    res = sa.classify_small_orbits(trivial, 2)
    assert res.orbits == []
    assert [c.kind for _, c in res.positive_dimensional] == ["all"]


def test_s4_subgroup_count(action_table):
    assert len(sa.all_subgroups(action_table)) == 30


def test_published_points_on_surface(points):
    assert len(points) == 18
    assert all(p.on_surface() for p in points.values())


def test_classification_closed_and_disjoint(classification, action_table):
    seen = set()
    for o in classification.orbits:
        pts = set(o.points)
        assert not pts & seen
        seen |= pts
        for g in action_table.elements:
            assert {sa.act(g, p) for p in pts} == pts


def _surface_point(a: Fraction, b: Fraction) -> sa.ProjPoint:
    return sa.ProjPoint.affine(a, b, 1 / (a * b))


nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(lambda f: f != 0)


@given(nonzero, nonzero, st.integers(0, 23), st.integers(0, 23))
def test_right_action(action_table, a, b, i, j):
    p = _surface_point(a, b)
    g, h = action_table.elements[i], action_table.elements[j]
    assert sa.act(g * h, p) == sa.act(h, sa.act(g, p))


@given(nonzero, nonzero, st.integers(0, 23), st.integers(0, 23))
def test_matrix_right_action(rho_table, a, b, i, j):
    p = sa.ProjPoint.plane(a, b, 1)
    g, h = rho_table.elements[i], rho_table.elements[j]
    assert sa.act(g * h, p) == sa.act(h, sa.act(g, p))


@given(st.sampled_from([(1, 1), (-1, 1), (2, 3), (OMEGA, OMEGA), (1, -1), (Fraction(1, 2), -4)]))
def test_orbit_stabilizer(action_table, ab):
    a, b = (CycNum.coerce(v) if not isinstance(v, CycNum) else v for v in ab)
    p = sa.ProjPoint.affine(a, b, (a * b).inverse())
    assert len(sa.orbit(p, action_table)) * sa.stabilizer(p, action_table).order == 24


@given(st.integers(0, 23), st.integers(0, 10**6))
def test_fixed_locus_points_are_fixed(action_table, i, seed):
    g = action_table.elements[i]
    rng = random.Random(seed)
    for comp in sa.fixed_locus(g):
        for p in comp.sample_points(rng, 3):
            assert p.on_surface()
            assert sa.act(g, p) == p


@given(st.permutations(range(3)), st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3),
       st.integers(0, 10**6))
def test_fixed_locus_general_signed_maps(perm, signs, seed):
    g = sa.SignedMonomialMap(tuple(perm), tuple(signs))
    rng = random.Random(seed)
    for comp in sa.fixed_locus(g):
        for p in comp.sample_points(rng, 3):
            assert sa.act(g, p) == p
