"""Verification suites, report assembly, and JSON/text rendering."""

from __future__ import annotations

import json
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from . import __version__
from . import function_field as ff
from . import matrix_groups as mg
from . import noether as nt
from . import picard as pc
from . import surface_action as sa
from .exact_field import CycNum

SUITE_ORDER = ("group", "orbits", "picard", "noether", "a5", "funfield")
SUITE_CHOICES = SUITE_ORDER + ("all",)
REPORT_CAP = 1000

GLYPHS = {"pass": "✓", "fail": "✗", "skipped": "-"}


class UnknownSuite(ValueError):
    pass


@dataclass
class CheckResult:
    id: str
    paper_ref: str
    title: str
    status: str
    witness: object
    elapsed_ms: float | None = None
    suite: str = ""
    lines: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"id": self.id, "paper_ref": self.paper_ref, "title": self.title, "status": self.status,
                "witness": self.witness, "elapsed_ms": self.elapsed_ms}


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def exit_code(self) -> int:
        return 1 if self.status == "fail" else 0

    def check(self, cid: str) -> CheckResult:
        return next(c for c in self.checks if c.id == cid)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "status": self.status,
            "counts": self.counts,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.id)],
            "toolchain": {"package": "vgc", "version": __version__,
                          "python": platform.python_version(), "implementation": platform.python_implementation()},
            "config": self.config,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# context shared by checks


class Context:
    """Fixtures loaded once per run; parse errors surface before any check runs."""

    def __init__(self, fixtures_dir: str | Path | None = None):
        self.fixtures_dir = mg.fixtures_path(fixtures_dir)
        self.rho = mg.load_fixture_group("s4_rho", self.fixtures_dir)
        self.g216 = mg.load_fixture_group("g216", self.fixtures_dir)
        try:
            self.points = sa.published_points(self.fixtures_dir)
            self.published = sa.published_orbits(self.fixtures_dir)
        except json.JSONDecodeError as exc:
            raise mg.FixtureError(f"{self.fixtures_dir / 'lemma13_points.json'}: line {exc.lineno}, "
                                  f"column {exc.colno}: {exc.msg}") from None
        self._cache: dict = {}

    def cached(self, key: str, fn: Callable):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def rho_table(self) -> mg.GroupTable:
        return self.cached("rho", lambda: self.rho.closure(REPORT_CAP))

    def g216_table(self) -> mg.GroupTable:
        return self.cached("g216", lambda: self.g216.closure(REPORT_CAP))

    def maps(self) -> dict:
        return self.cached("maps", lambda: sa.s4_maps(self.rho))

    def action_table(self) -> mg.GroupTable:
        return self.cached("action", lambda: mg.closure(list(self.maps().values()), REPORT_CAP,
                                                         list(self.maps())))

    def classification(self):
        def run():
            labels = {p: lb for lb, p in self.points.items()}
            names = {lb: n for n, lbs in self.published.items() for lb in lbs}
            return sa.classify_small_orbits(self.action_table(), 6, labels, names)
        return self.cached("classify", run)

    def lattice_action(self):
        return self.cached("lattice", lambda: pc.induced_action(self.maps()))

    def plane_actions(self):
        return self.cached("plane", lambda: ff.plane_actions(self.g216))


def _sub(defn: mg.GroupDefinition, labels: Iterable[str]) -> list:
    return [defn.generator(lb) for lb in labels]


# ---------------------------------------------------------------------------
# checks: each returns (ok, witness, text lines)


def c_rho_order(ctx: Context):
    n = ctx.rho_table().order
    return n == 24, {"order": n, "expected": 24}, [f"|<rho(sigma), rho(tau), rho(lambda1), rho(lambda2)>| = {n}"]


def c_rho_relations(ctx: Context):
    res = mg.verify_presentation(ctx.rho_table(), mg.rho_assignment(ctx.rho))
    return res.ok, {"relations": list(mg.S4_RELATIONS), "failures": res.failures,
                    "generates": res.generates}, [f"{len(mg.S4_RELATIONS)} relations checked"]


def c_g216_order(ctx: Context):
    n = ctx.g216_table().order
    return n == 216, {"order": n, "expected": 216}, [f"|G| = {n} in PGL(3)"]


def c_h1_presentation(ctx: Context):
    table = ctx.g216_table()
    assign = mg.g216_assignment(ctx.g216)
    h1 = mg.subgroup_closure(table, assign.values())
    res = mg.verify_presentation(h1, assign)
    ok = res.ok and h1.order == 24
    return ok, {"order": h1.order, "failures": res.failures, "assignment": {
        "sigma": "A", "tau": "B", "lambda1": "C1", "lambda2": "C2"}}, [f"|H1| = {h1.order}, relations hold: {res.ok}"]


def c_h2(ctx: Context):
    table = ctx.g216_table()
    info = mg.subgroup_info(table, _sub(ctx.g216, ["D1", "D2"]))
    ok = info.order == 9 and info.normal
    return ok, {"H2": info.as_dict()}, [f"|H2| = {info.order}, index {info.index}, normal: {info.normal}"]


def c_semidirect(ctx: Context):
    table = ctx.g216_table()
    h1 = mg.subgroup_closure(table, _sub(ctx.g216, ["A", "B", "C1", "C2"]))
    h2 = mg.subgroup_closure(table, _sub(ctx.g216, ["D1", "D2"]))
    fwd = mg.semidirect_check(table, h1, h2)
    rev = mg.semidirect_check(table, h2, h1)
    return fwd and not rev, {"G = H2 : H1": fwd, "reverse roles": rev}, [f"H2 normal complement of H1: {fwd}"]


def c_h3(ctx: Context):
    table = ctx.g216_table()
    d1, d2 = ctx.g216.generator("D1"), ctx.g216.generator("D2")
    info = mg.subgroup_info(table, [d1 * d2 * d2])
    ok = info.order == 3 and info.normal
    return ok, {"H3": info.as_dict()}, [f"|H3| = {info.order}, normal: {info.normal}"]


def c_transport(ctx: Context):
    table = ctx.g216_table()
    rho = mg.rho_assignment(ctx.rho)
    g = mg.g216_assignment(ctx.g216)
    assignment = {k: (rho[k], g[k]) for k in rho}
    ok = mg.conjugation_transport(table, rho["tau"], assignment)
    controls = {"identity": mg.conjugation_transport(table, rho["tau"].identity(), assignment),
                "rho(sigma)": mg.conjugation_transport(table, rho["sigma"], assignment)}
    return ok and not any(controls.values()), {"t = rho(tau)": ok, "controls": controls}, \
        [f"rho(tau) rho(g) rho(tau)^-1 matches A, B, C1, C2: {ok}"]


def c_invariance(ctx: Context):
    table = ctx.action_table()
    res = sa.surface_invariance(table.elements)
    bad = [i for i, s in enumerate(res.scalars) if s != 1]
    return not bad and table.order == 24, {"elements": table.order, "non_unit_scalars": bad,
                                           "generators": {k: g.describe() for k, g in ctx.maps().items()}}, \
        [f"x0y0z0 - x1y1z1 preserved with scalar 1 by all {table.order} elements"]


def _orbit_lines(orbits) -> list[str]:
    return [f"{o.name}: size {o.size}, points {', '.join(o.labels)}, stabilizer order {o.stabilizer_order}"
            for o in orbits]


def c_no_small(ctx: Context):
    cls = ctx.classification()
    bad = sorted({o.size for o in cls.orbits} & {1, 2, 5})
    witness = {"bound": 6, "sizes": cls.sizes, "forbidden_sizes_found": bad,
               "subgroups_examined": cls.subgroups_examined, "strategy": cls.strategy,
               "positive_dimensional_components": len(cls.positive_dimensional)}
    return not bad and not cls.positive_dimensional, witness, [f"orbit sizes below 6: {cls.sizes}"]


def _published_match(ctx: Context, size: int, names: Iterable[str]):
    cls = ctx.classification()
    orbs = [o for o in cls.orbits if o.size == size]
    expected = sorted(sorted(ctx.published[k]) for k in names)
    found = sorted(sorted(o.labels) for o in orbs)
    coords_ok = all(ctx.points.get(lb) == p for o in orbs for lb, p in zip(o.labels, o.points))
    ok = found == expected and coords_ok
    return ok, {"orbits": [o.to_json() for o in orbs], "expected_labels": expected}, _orbit_lines(orbs)


def c_size4(ctx: Context):
    return _published_match(ctx, 4, ("R1", "R2", "R3"))


def c_size3(ctx: Context):
    return _published_match(ctx, 3, ("P", "Q"))


def c_points(ctx: Context):
    cls = ctx.classification()
    off = [lb for lb, p in ctx.points.items() if not p.on_surface()]
    total = cls.num_points
    return not off and total == 18 and len(ctx.points) == 18, \
        {"published": len(ctx.points), "classified": total, "off_surface": off}, \
        [f"{total} points in {len(cls.orbits)} orbits, all 18 published points on X1: {not off}"]


def c_fixed(ctx: Context):
    maps = ctx.maps()
    tau_locus = sa.fixed_locus(maps["tau"])
    tau_boundary = [c.describe() for c in tau_locus if c.kind == "point" and c.point.on_boundary()]
    ll = maps["lambda1"] * maps["lambda2"]
    klein = sa.common_fixed_locus([maps["lambda1"], maps["lambda2"]])
    affine = [c.describe() for c in klein if c.kind != "point" or not c.point.on_boundary()]
    ok = not tau_boundary and not affine and all(c.kind == "point" for c in tau_locus)
    witness = {"tau_fixed_locus": [c.describe() for c in tau_locus], "tau_fixed_on_boundary": tau_boundary,
               "lambda1_lambda2": ll.describe(),
               "klein_fixed_locus": [c.describe() for c in klein], "klein_fixed_in_affine_chart": affine}
    return ok, witness, [f"tau fixes {len(tau_locus)} points, none on x0y0z0 = 0; "
                         f"<lambda1, lambda2> fixes {len(klein)} boundary points only"]


def c_hexagon(ctx: Context):
    dp6 = pc.build_dp6()
    selfint = [dp6.lattice.dot(c, c) for c in dp6.hexagon]
    geo = dp6.geometric_adjacency()
    lat = [[max(0, v) if i != j else 0 for j, v in enumerate(row)] for i, row in enumerate(dp6.intersection_matrix())]
    ok = dp6.is_cycle() and all(s == -1 for s in selfint) and geo == lat
    witness = {"classes": {c.tag: list(c.coords) for c in dp6.hexagon},
               "loci": {c.tag: pc.locus_str(c.locus) for c in dp6.hexagon},
               "intersection_matrix": dp6.intersection_matrix(), "geometric_adjacency_matches": geo == lat}
    return ok, witness, [str(c) + "  " + pc.locus_str(c.locus) for c in dp6.hexagon]


def c_lattice(ctx: Context):
    lat = pc.PicLattice()
    sig = lat.signature()
    ksq = lat.dot(lat.K, lat.K)
    return sig == (1, 3) and ksq == 6, {"signature": list(sig), "K": list(lat.K.coords), "K^2": ksq}, \
        [f"signature {sig}, K^2 = {ksq}"]


def c_hexagon_sum(ctx: Context):
    dp6 = pc.build_dp6()
    s = dp6.hexagon_sum()
    ok = s.coords == dp6.lattice.anticanonical.coords
    return ok, {"sum": list(s.coords), "-K": list(dp6.lattice.anticanonical.coords)}, [f"sum of C_i = {s}"]


def c_lattice_action(ctx: Context):
    act = ctx.lattice_action()
    gram = act.preserves_gram()
    fixk = act.fixes_K()
    rel = act.relation_failures()
    ok = all(gram.values()) and all(fixk.values()) and not rel
    witness = {"hexagon_permutations": {k: list(v) for k, v in act.hexagon_permutations.items()},
               "matrices": {k: [list(r) for r in m.matrix] for k, m in act.generators.items()},
               "preserves_gram": gram, "fixes_K": fixk, "relation_failures": rel,
               "hexagon_orbits": act.hexagon_orbits()}
    lines = [f"{k}: C_i -> C_perm(i), perm = {list(v)}" for k, v in act.hexagon_permutations.items()]
    return ok, witness, lines


def c_invariant(ctx: Context):
    basis = pc.invariant_sublattice(ctx.lattice_action())
    lat = pc.PicLattice()
    ok = len(basis) == 1 and basis[0].coords == lat.anticanonical.coords
    return ok, {"basis": [list(b.coords) for b in basis], "-K": list(lat.anticanonical.coords)}, \
        [f"Pic^S4 basis: {[str(b) for b in basis]}"]


def c_fibers(ctx: Context):
    lat = pc.PicLattice()
    rows = []
    ok = True
    for E in pc.fiber_classes():
        sq = lat.dot(E, E)
        k = lat.dot(E, lat.anticanonical)
        avoid = pc.fiber_avoids_blown_points(E)
        ok = ok and sq == 0 and k == 2 and avoid
        rows.append({"fiber": E.tag, "locus": pc.locus_str(E.locus), "class": list(E.coords),
                     "self_intersection": sq, "minus_K_dot": k, "avoids_blown_points": avoid})
    return ok, {"fibers": rows}, [f"{r['fiber']}: E^2 = {r['self_intersection']}, -K.E = {r['minus_K_dot']}"
                                  for r in rows]


def c_bookkeeping(ctx: Context):
    pts = [ctx.points[f"R1{j}"] for j in range(1, 5)]
    ident = nt.adjoint_identity(pts)
    H = nt.blowup_bookkeeping(nt.anticanonical_system(), pts)
    sq = H.dot(H)
    ok = ident["holds"] and str(sq) == "6a^2 - 4r^2"
    return ok, {"adjoint_identity": ident, "self_intersection_size4": str(sq)}, \
        [f"(q*(-aK) - r sum E)^2 = {sq}; adjoint identity holds: {ident['holds']}"]


def c_bound(ksq: int, expected: int):
    def run(ctx: Context):
        cert = nt.orbit_size_certificate(ksq)
        return cert.bound == expected, cert.to_json(), [f"orbit_size_bound({ksq}) = {cert.bound}"]
    return run


def _exclusions(ctx: Context, size: int, expected_form: str):
    cls = ctx.classification()
    rows, ok = [], True
    for o in cls.orbits:
        if o.size != size:
            continue
        cert, _ = nt.best_exclusion(o)
        if cert is None:
            ok = False
            rows.append({"orbit": o.name, "excluded": False})
            continue
        agree = cert.numeric_check(50)
        ok = ok and cert.excludes and str(cert.form) == expected_form and agree
        rows.append({**cert.to_json(), "numeric_check_1_50": agree})
    ok = ok and bool(rows)
    return ok, {"certificates": rows}, [f"{r['orbit']} via {r.get('curve')}: {r.get('form')} "
                                        f"({r.get('conclusion', 'not excluded')})" for r in rows]


def c_exclude_size4(ctx: Context):
    return _exclusions(ctx, 4, "2a - 2r")


def c_exclude_size3(ctx: Context):
    return _exclusions(ctx, 3, "a - r")


def c_prove_s4(ctx: Context):
    proof = nt.prove_s4(group=ctx.action_table(), strict=False, fixtures_dir=ctx.fixtures_dir)
    steps = [{"claim": s.claim, "status": s.status} for s in proof.steps]
    return proof.status == "proved", {"status": proof.status, "digest": proof.digest(), "steps": steps}, \
        [f"step {i + 1}: {s.status} {s.claim}" for i, s in enumerate(proof.steps)]


def _a5():
    return mg.alternating_group(5)


def c_a5_classes(ctx: Context):
    sizes = mg.class_sizes(ctx.cached("a5", _a5))
    ok = sorted(sizes) == [1, 12, 12, 15, 20]
    return ok, {"class_sizes": sorted(sizes)}, [f"class sizes {sorted(sizes)}"]


def c_a5_normal(ctx: Context):
    orders = sorted(mg.normal_subgroup_orders(ctx.cached("a5", _a5)))
    return orders == [1, 60], {"normal_subgroup_orders": orders}, [f"normal subgroup orders {orders}"]


def c_a5_chars(ctx: Context):
    g = ctx.cached("a5", _a5)
    ms = mg.char_degree_multisets(g.order, len(mg.class_sizes(g)), mg.abelianization_order(g))
    ok = ms == [(1, 3, 3, 4, 5)]
    return ok, {"multisets": [list(m) for m in ms]}, [f"character degree multisets {ms}"]


def c_a5_hom(ctx: Context):
    g = ctx.cached("a5", _a5)
    cases = [nt.homomorphism_obstruction(g, d) for d in (3, 4)]
    return not any(c["possible"] for c in cases), {"cases": cases}, \
        [f"d = {c['d']}: possible kernel orders {c['kernel_orders']}" for c in cases]


def c_prove_a5(ctx: Context):
    proof = nt.prove_a5(ctx.cached("a5", _a5), strict=False)
    control = nt.prove_a5(mg.symmetric_group(4), strict=False)
    steps = [{"claim": s.claim, "status": s.status} for s in proof.steps]
    ok = proof.status == "proved" and control.status == "refuted"
    return ok, {"status": proof.status, "digest": proof.digest(), "steps": steps,
                "s4_control": control.status}, [f"step {i + 1}: {s.status} {s.claim}" for i, s in enumerate(proof.steps)]


def c_uv_fixed(ctx: Context):
    ok = ff.h3_fixes_uv(ctx.g216)
    return ok, {"u": str(ff.U), "v": str(ff.V), "H3_elements": len(ff.h3_elements(ctx.g216))}, \
        [f"u = {ff.U}, v = {ff.V} fixed by H3: {ok}"]


def c_uv_table(ctx: Context):
    ok, rows = ff.verify_uv_table(ctx.plane_actions())
    return ok, {"rows": rows}, [f"{k}: (u, v) -> ({r['u']}, {r['v']})" for k, r in rows.items()]


def c_theta(ctx: Context):
    t = ff.tower_degrees(ctx.g216)
    ok = t["theta_eigenvalue"]["holds"] and t["theta_cubed_times_u_equals_v"]
    return ok, {"theta_eigenvalue": t["theta_eigenvalue"], "theta^3 u = v": t["theta_cubed_times_u_equals_v"]}, \
        [f"theta^(D1 D2^2) = {t['theta_eigenvalue']['image']}"]


def c_recovery(ctx: Context):
    t = ff.tower_degrees(ctx.g216)
    ids = t["recovery_identities"]
    ok = t["degree_over_uv"] == 3
    lines = [f"{i['statement']}: lhs {i['lhs']}, rhs {i['rhs']}, {'holds' if i['holds'] else 'DOES NOT HOLD'}"
             for i in ids]
    return ok, {"identities": ids, "discrepancies": t["discrepancies"], "degree_over_uv": t["degree_over_uv"],
                "used_for_degree": ["x = u*theta", "y = v/theta"]}, lines


def c_tower(ctx: Context):
    t = ff.tower_degrees(ctx.g216)
    ok = (t["h2_order"] == 9 and t["h2_abelian"] and t["h2_exponent_3"] and t["h2_invariants_x3_y3"]
          and t["x3_y3_in_C(u,v)"] and t["degree_over_h2_invariants"] == 9)
    keys = ("h2_order", "h2_abelian", "h2_exponent_3", "galois_group_shape", "h2_invariants_x3_y3",
            "x3_y3_in_C(u,v)", "degree_over_h2_invariants", "tower")
    return ok, {k: t[k] for k in keys}, [f"Galois group {t['galois_group_shape']}, degree {t['degree_over_h2_invariants']}"]


def c_identify(ctx: Context):
    ok, detail = ff.identify_with_x1(ctx.plane_actions(), ctx.maps())
    return ok, detail, [f"{k} <-> {r['matched_with']}: {r['match']}" for k, r in detail["rows"].items()]


def c_compat(ctx: Context):
    r = ff.action_compatibility(ctx.g216_table(), ctx.plane_actions(), ctx.g216)
    return r["ok"], r, [f"substitution agrees with the group law on {r['elements']} elements"]


# (id, paper_ref, title, function) per suite
CHECKS: dict[str, list[tuple[str, str, str, Callable]]] = {
    "group": [
        ("S1.1.order", "§1.1", "the rho-images generate a group of order 24", c_rho_order),
        ("S1.1.relations", "§1.1", "the rho-images satisfy the S4 presentation", c_rho_relations),
        ("S4.fact1", "§4 fact 1", "G has order 216 in PGL(3)", c_g216_order),
        ("S4.fact2", "§4 fact 2", "A, B, C1, C2 satisfy the S4 presentation", c_h1_presentation),
        ("S4.fact3.normal", "§4 fact 3", "H2 = <D1, D2> has order 9 and is normal", c_h2),
        ("S4.fact3.semidirect", "§4 fact 3", "G is the semidirect product of H1 and H2", c_semidirect),
        ("S4.fact4", "§4 fact 4", "H3 = <D1 D2^2> has order 3 and is normal", c_h3),
        ("S4.fact5", "§4 fact 5", "conjugation by rho(tau) carries rho to A, B, C1, C2", c_transport),
    ],
    "orbits": [
        ("S1.1.invariance", "§1.1", "the S4-action preserves X1", c_invariance),
        ("L1.3.i", "Lemma 1.3 (i)", "no orbits of size 1, 2 or 5", c_no_small),
        ("L1.3.ii", "Lemma 1.3 (ii)", "three orbits of size 4", c_size4),
        ("L1.3.iii", "Lemma 1.3 (iii)", "two orbits of size 3", c_size3),
        ("L1.3.points", "Lemma 1.3", "the 18 published points", c_points),
        ("L1.3.fixed", "Lemma 1.3 (proof)", "fixed loci of tau and <lambda1, lambda2>", c_fixed),
    ],
    "picard": [
        ("L1.1.hexagon", "Lemma 1.1", "the boundary is a hexagon of (-1)-curves", c_hexagon),
        ("L1.1.lattice", "Lemma 1.1", "Pic(X1) has signature (1, 3) and K^2 = 6", c_lattice),
        ("L1.2.sum", "Lemma 1.2", "the hexagon sums to -K", c_hexagon_sum),
        ("L1.2.action", "Lemma 1.2", "induced lattice action", c_lattice_action),
        ("L1.2.invariant", "Lemma 1.2", "Pic^S4(X1) = Z(-K)", c_invariant),
        ("L1.4", "Lemma 1.4", "fibers x = omega^i have E^2 = 0", c_fibers),
    ],
    "noether": [
        ("L2.1", "Lemma 2.1, Eq. (1)", "blow-up bookkeeping identity", c_bookkeeping),
        ("S3.1.bound", "§3.1", "orbit size bound for K^2 = 6", c_bound(6, 5)),
        ("S3.2.bound", "§3.2", "orbit size bound for K^2 = 5", c_bound(5, 4)),
        ("L3.1", "Lemma 3.1", "size-4 orbits are not maximal singularities", c_exclude_size4),
        ("L3.2", "Lemma 3.2", "size-3 orbits are not maximal singularities", c_exclude_size3),
        ("T0.4.S4", "Theorem 0.4 (S4)", "structured proof for S4", c_prove_s4),
    ],
    "a5": [
        ("L1.5.classes", "Lemma 1.5", "conjugacy class sizes of A5", c_a5_classes),
        ("L1.5.normal", "Lemma 1.5", "A5 is simple", c_a5_normal),
        ("L1.5.chars", "Lemma 1.5", "A5 has no 2-dimensional irreducible representation", c_a5_chars),
        ("L1.5.hom", "Lemma 1.5", "no transitive A5-action on 3 or 4 points", c_a5_hom),
        ("T0.4.A5", "Theorem 0.4 (A5)", "structured proof for A5", c_prove_a5),
    ],
    "funfield": [
        ("L4.1.invariance", "Lemma 4.1", "u and v are H3-invariant", c_uv_fixed),
        ("L4.1.table", "Lemma 4.1 (ii)", "the induced S4-action on (u, v)", c_uv_table),
        ("L4.1.theta", "Lemma 4.1 (proof)", "theta is an omega-eigenvector with theta^3 = v/u", c_theta),
        ("L4.1.recovery", "Lemma 4.1 (proof)", "x and y through u, v, theta", c_recovery),
        ("S4.tower", "§4", "C(P^2)^H2 has Galois group (Z/3)^2", c_tower),
        ("S4.identify", "§4", "C(u, v) matches C(X1) with the S4-action", c_identify),
        ("S4.compat", "§4", "substitution respects the group law", c_compat),
    ],
}


def parse_suites(names: Iterable[str]) -> list[str]:
    chosen: set[str] = set()
    for raw in names:
        for name in (s.strip() for s in raw.split(",")):
            if not name:
                continue
            if name not in SUITE_CHOICES:
                raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITE_CHOICES)}")
            chosen.update(SUITE_ORDER if name == "all" else [name])
    return [s for s in SUITE_ORDER if s in chosen]


def run_suite(suites: Iterable[str] = ("all",), fixtures_dir: str | Path | None = None,
              output_format: str = "json", timings: bool = False) -> Report:
    names = list(suites)
    selected = parse_suites(names)
    label = ",".join(sorted({n.strip() for raw in names for n in raw.split(",") if n.strip()}))
    config = {"suites": selected, "fixtures": "packaged" if fixtures_dir is None else "custom",
              "format": output_format}
    report = Report(label, config=config)
    if not selected:
        report.warnings.append("no suites selected")
        return report
    ctx = Context(fixtures_dir)
    for suite in selected:
        for cid, ref, title, fn in CHECKS[suite]:
            start = time.perf_counter()
            try:
                ok, witness, lines = fn(ctx)
                status = "pass" if ok else "fail"
            except Exception as exc:  # a crashing check is a failing check
                witness, lines, status = {"error": type(exc).__name__, "message": str(exc)}, [], "fail"
            elapsed = round((time.perf_counter() - start) * 1000, 3) if timings else None
            report.checks.append(CheckResult(cid, ref, title, status, _jsonable(witness), elapsed, suite, lines))
    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, CycNum):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = [f"vgc report: suite {report.suite or '(none)'}"]
    for w in report.warnings:
        out.append(f"warning: {w}")
    current = None
    for c in report.checks:
        if c.suite != current:
            current = c.suite
            out.append(f"[{current}]")
        out.append(f"  {GLYPHS[c.status]} {c.id}  ({c.paper_ref})  {c.title}")
        for line in c.lines:
            out.append(f"      {line}")
        if c.status == "fail":
            out.append("      witness: " + json.dumps(c.witness, sort_keys=True, ensure_ascii=False))
    n = report.counts
    out.append(f"{len(report.checks)} checks: {n['pass']} pass, {n['fail']} fail, {n['skipped']} skipped"
               f" -> {report.status.upper()}")
    return ("\n".join(out) + "\n").encode("utf-8")
