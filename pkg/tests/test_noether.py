from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from vgc import noether as nt
from vgc import picard as pc
from vgc import surface_action as sa
from vgc.matrix_groups import symmetric_group


@pytest.fixture(scope="module")
def s4_proof():
    return nt.prove_s4()


def _orbit_points(points, prefix):
    return [points[lb] for lb in sorted(points) if lb.startswith(prefix) and lb[len(prefix)].isdigit()]


def test_bookkeeping_size4(points):
    r1 = _orbit_points(points, "R1")
    H = nt.blowup_bookkeeping(nt.anticanonical_system(), r1)
    assert str(H.dot(H)) == "6a^2 - 4r^2"
    assert H.lattice.rank == 8
    k = H.lattice.canonical()
    assert H.lattice.dot(k, k) == 6 - 4


def test_bookkeeping_empty_orbit():
    H = nt.anticanonical_system()
    out = nt.blowup_bookkeeping(H, [])
    assert out.coeffs == H.coeffs
    assert str(out.dot(out)) == "6a^2"


def test_bookkeeping_repeated_point(points):
    with pytest.raises(nt.RepeatedPoint):
        nt.blowup_bookkeeping(nt.anticanonical_system(), [points["R11"], points["R11"]])


def test_bookkeeping_off_surface():
    with pytest.raises(nt.NoetherError):
        nt.blowup_bookkeeping(nt.anticanonical_system(), [sa.ProjPoint.affine(1, 2, 3)])


def test_adjoint_identity(points):
    res = nt.adjoint_identity(_orbit_points(points, "R1"))
    assert res["holds"]
    assert res["exceptional_coefficients"] == ["m - r"] * 4


def test_orbit_size_bound():
    assert nt.orbit_size_bound(6) == 5
    assert nt.orbit_size_bound(5) == 4
    assert nt.orbit_size_bound(1) == 0
    with pytest.raises(ValueError):
        nt.orbit_size_bound(0)


def test_orbit_size_witness():
    cert = nt.orbit_size_certificate(6)
    a, r = cert.witness
    assert r > a >= 1 and a * a * 6 >= r * r * cert.bound


def test_exclusion_size4(points):
    cert = nt.exclusion_test(_orbit_points(points, "R1"), pc.fiber_classes()[0], "R1")
    assert (cert.c0, cert.c1) == (2, -2)
    assert str(cert.form) == "2a - 2r"
    assert cert.excludes and cert.numeric_check(50)


def test_exclusion_size3(points):
    c1 = pc.build_dp6().hexagon[0]
    cert = nt.exclusion_test(_orbit_points(points, "P"), c1, "P")
    assert str(cert.form) == "a - r"
    assert cert.excludes and cert.numeric_check(50)


def test_exclusion_no_incidence(points):
    cert = nt.exclusion_test(_orbit_points(points, "P"), pc.fiber_classes()[0], "P")
    assert str(cert.form) == "2a"
    assert not cert.excludes
    assert cert.conclusion == "no exclusion from this curve"


def test_exclusion_untagged(points):
    with pytest.raises(pc.UntaggedClass):
        nt.exclusion_test(_orbit_points(points, "P"), pc.DivClass((1, 0, 0, 0)), "P")


def test_prove_s4(s4_proof):
    assert s4_proof.status == "proved"
    assert len(s4_proof.steps) == 5
    assert all(s.status == "pass" for s in s4_proof.steps)
    step4 = s4_proof.steps[3].certificate
    assert (step4["excluded"], step4["total"]) == (5, 5)
    forms = {c["orbit"]: c["form"] for c in step4["certificates"]}
    assert forms == {"R1": "2a - 2r", "R2": "2a - 2r", "R3": "2a - 2r", "P": "a - r", "Q": "a - r"}
    assert s4_proof.assumptions and s4_proof.remarks


def test_prove_s4_deterministic(s4_proof):
    again = nt.prove_s4()
    assert again.digest() == s4_proof.digest()
    assert json.dumps(again.to_json(), sort_keys=True) == json.dumps(s4_proof.to_json(), sort_keys=True)


def test_prove_s4_fake_orbit(points):
    fake = sa.Orbit([points["R11"], points["R12"]], ["R11", "R12"], 12, "fake")
    with pytest.raises(nt.ProofAborted, match="not a single group orbit") as err:
        nt.prove_s4(extra_orbits=[fake])
    proof = err.value.proof
    assert proof.status == "aborted" and len(proof.steps) == 3 and proof.steps[2].status == "fail"
    lenient = nt.prove_s4(extra_orbits=[fake], strict=False)
    assert lenient.status == "aborted"


def test_prove_s4_ksq8():
    with pytest.raises(nt.ProofAborted, match="bound d <= 7") as err:
        nt.prove_s4(ksq=8)
    assert err.value.proof.steps[1].certificate["bound"] == 7


def test_prove_a5():
    proof = nt.prove_a5()
    assert proof.status == "proved"
    assert [s.status for s in proof.steps] == ["pass"] * 5
    assert proof.steps[1].certificate["multisets"] == [[1, 3, 3, 4, 5]]


def test_prove_a5_on_s4_is_refuted():
    proof = nt.prove_a5(group=symmetric_group(4))
    assert proof.status == "refuted"
    cases = proof.steps[-1].certificate["cases"]
    assert any(c["possible"] for c in cases)


def test_prove_a5_missing_multiset():
    with pytest.raises(nt.ProofAborted):
        nt.prove_a5(drop_multiset=True)


def test_homomorphism_obstruction():
    s4 = symmetric_group(4)
    assert nt.homomorphism_obstruction(s4, 3)["kernel_orders"] == [4]
    from vgc.matrix_groups import alternating_group
    assert not nt.homomorphism_obstruction(alternating_group(5), 4)["possible"]


coef = st.integers(-6, 6)


@given(coef, coef)
def test_negativity_matches_numeric(c0, c1):
    cert = nt.ExclusionCertificate("O", "C", c0, c1, ())
    numeric = all(c0 * a + c1 * r < 0 for a in range(1, 50) for r in range(a + 1, 51))
    assert cert.excludes == numeric
    assert cert.numeric_check(50)


classes = st.lists(st.integers(-4, 4), min_size=4, max_size=4).map(lambda v: pc.DivClass(tuple(v)))


@given(classes, classes, st.integers(0, 3))
def test_pullback_preserves_intersections(points, d1, d2, k):
    base = pc.PicLattice()
    lat = nt.BlowupLattice(base).blow_up(_orbit_points(points, "R2"))
    assert lat.dot(lat.pullback(d1), lat.pullback(d2)) == base.dot(d1, d2)
    assert lat.dot(lat.pullback(d1), lat.exceptional(k)) == 0
    assert lat.dot(lat.exceptional(k), lat.exceptional(k)) == -1


@given(st.integers(1, 30), st.integers(1, 30))
def test_symbolic_form_evaluates(points, a, r):
    H = nt.blowup_bookkeeping(nt.anticanonical_system(), _orbit_points(points, "Q"))
    assert H.dot(H).evaluate(a=a, r=r) == 6 * a * a - 3 * r * r
