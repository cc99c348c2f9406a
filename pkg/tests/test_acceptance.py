"""The ten acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import json
import sys

import pytest

from vgc import function_field as ff
from vgc import matrix_groups as mg
from vgc import noether as nt
from vgc import picard as pc
from vgc import surface_action as sa

from helpers import copy_fixtures, corrupt_d1, run_vgc

criterion = pytest.mark.criterion


@criterion(1, "group orders 24, 216, 9, 3")
def test_group_orders(rho_table, g216_table, g216_defn):
    assert rho_table.order == 24
    assert g216_table.order == 216
    d1, d2 = g216_defn.generator("D1"), g216_defn.generator("D2")
    assert mg.subgroup_info(g216_table, [d1, d2]).order == 9
    assert mg.subgroup_info(g216_table, [d1 * d2 * d2]).order == 3


@criterion(2, "S4 relations for both assignments; transport by rho(tau)")
def test_presentation(rho_table, rho_defn, g216_table, g216_defn):
    assert mg.verify_presentation(rho_table, mg.rho_assignment(rho_defn)).ok
    assign = mg.g216_assignment(g216_defn)
    h1 = mg.subgroup_closure(g216_table, assign.values())
    assert h1.order == 24 and mg.verify_presentation(h1, assign).ok
    rho = mg.rho_assignment(rho_defn)
    assert mg.conjugation_transport(g216_table, rho["tau"], {k: (rho[k], assign[k]) for k in rho})


@criterion(3, "x0y0z0 - x1y1z1 preserved with scalar 1 by all 24 elements")
def test_surface_invariance(action_table):
    res = sa.surface_invariance(action_table.elements)
    assert action_table.order == 24
    assert res.invariant and all(s == 1 for s in res.scalars)


@criterion(4, "small orbits: 18 points, sizes (4,4,4,3,3), none of size 1, 2, 5")
def test_small_orbits(classification, points):
    assert classification.num_points == 18
    assert sorted(classification.sizes, reverse=True) == [4, 4, 4, 3, 3]
    assert not {1, 2, 5} & set(classification.sizes)
    assert not classification.positive_dimensional
    assert classification.subgroups_examined > 0
    published = sa.published_orbits()
    assert sorted(sorted(o.labels) for o in classification.orbits) == sorted(sorted(v) for v in published.values())
    for o in classification.orbits:
        assert all(points[lb] == p for lb, p in zip(o.labels, o.points))


@criterion(5, "Picard lattice: hexagon, -K, fibers, invariant sublattice Z(-K)")
def test_picard():
    dp6 = pc.build_dp6()
    lat = dp6.lattice
    assert [lat.dot(c, c) for c in dp6.hexagon] == [-1] * 6
    assert dp6.is_cycle()
    assert dp6.hexagon_sum().coords == lat.anticanonical.coords
    assert lat.dot(lat.K, lat.K) == 6
    for e in pc.fiber_classes():
        assert lat.dot(e, e) == 0 and lat.dot(lat.anticanonical, e) == 2
    inv = pc.invariant_sublattice(pc.induced_action())
    assert [v.coords for v in inv] == [lat.anticanonical.coords]


@criterion(6, "Noether bounds 5 and 4, forms 2a - 2r and a - r, prove_s4 5/5")
def test_noether():
    assert nt.orbit_size_bound(6) == 5 and nt.orbit_size_bound(5) == 4
    proof = nt.prove_s4()
    assert proof.status == "proved"
    step = proof.steps[3].certificate
    assert (step["excluded"], step["total"]) == (5, 5)
    for c in step["certificates"]:
        expected = "2a - 2r" if c["orbit"].startswith("R") else "a - r"
        assert c["form"] == expected
        assert nt.negative_for_all(c["c0"], c["c1"])
        assert all(c["c0"] * a + c["c1"] * r < 0 for a in range(1, 50) for r in range(a + 1, 51))


@criterion(7, "A5: classes, normal subgroups, character degrees, prove_a5")
def test_a5():
    a5 = mg.alternating_group(5)
    assert sorted(mg.class_sizes(a5)) == [1, 12, 12, 15, 20]
    assert mg.normal_subgroup_orders(a5) == {1, 60}
    assert mg.char_degree_multisets(60, 5, 1) == [(1, 3, 3, 4, 5)]
    assert nt.prove_a5().status == "proved"


@criterion(8, "function field: H3 fixes u, v; table; theta^3 u = v; (Z/3)^2; identification")
def test_function_field():
    assert ff.h3_fixes_uv()
    assert ff.verify_uv_table()[0]
    assert ff.THETA**3 * ff.U == ff.V
    tower = ff.tower_degrees()
    assert tower["h2_order"] == 9 and tower["h2_abelian"] and tower["h2_exponent_3"]
    assert tower["galois_group_shape"] == "(Z/3)^2"
    assert ff.identify_with_x1()[0]


@criterion(9, "two vgc runs give byte-identical JSON")
def test_determinism():
    first = run_vgc("run", "--suite", "all", "--format", "json")
    second = run_vgc("run", "--suite", "all", "--format", "json")
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["status"] == "pass"


@criterion(10, "a corrupted g216.json entry fails with witness and exit 1")
def test_fault_injection(tmp_path):
    fx = copy_fixtures(tmp_path / "fixtures")
    corrupt_d1(fx)
    res = run_vgc("run", "--suite", "all", "--format", "text", env_extra={"VGC_FIXTURES": str(fx)})
    assert res.returncode == 1
    err = res.stderr.decode()
    assert "vgc: FAIL " in err
    out = res.stdout.decode()
    assert "✗" in out and "witness" in out


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
