"""Group actions on (P^1)^3 and P^2, and the surface X1: x0*y0*z0 = x1*y1*z1.

Actions are right actions: ``act(g * h, p) == act(h, act(g, p))``.  A
signed-monomial map sends affine coordinates ``(x_0, x_1, x_2)`` to
``(s_0 x_{perm[0]}, s_1 x_{perm[1]}, s_2 x_{perm[2]})``; this is exactly the
row-vector action of a monomial matrix, so ``SignedMonomialMap.from_matrix``
turns the representation matrices into maps on (P^1)^3.

Fixed loci are computed by propagating the linear constraints
``x_i = s x_j`` through a union-find with multiplicative weights.  Each
connected set of coordinates is either free (one P^1 parameter) or, when a
cycle of constraints multiplies to a scalar other than 1, pinned to 0 or
infinity.  Intersecting with the surface then only ever produces binomial
equations, which ``binomial_roots`` solves.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exact_field import CycNum, binomial_roots
from .matrix_groups import GroupElement, GroupTable, closure, fixtures_path, subgroup_closure


class DimensionMismatch(ValueError):
    pass


class OffSurface(ValueError):
    pass


class UnsupportedMap(TypeError):
    pass


INF = "inf"
ZERO = CycNum.coerce(0)
ONE = CycNum.coerce(1)


def _normalize(vec: Sequence) -> tuple[CycNum, ...]:
    vals = [CycNum.coerce(v) for v in vec]
    last = next((v for v in reversed(vals) if v), None)
    if last is None:
        raise ValueError("the zero vector is not a projective point")
    if last != 1:
        inv = last.inverse()
        vals = [v * inv for v in vals]
    return tuple(vals)


def p1(value) -> tuple[CycNum, CycNum]:
    """Homogeneous pair of an affine value (or ``INF``) on P^1."""
    if isinstance(value, str) and value == INF:
        return (ZERO, ONE)
    return _normalize((ONE, value))


class ProjPoint:
    """A point of a product of projective spaces, normalized factorwise.

    Each factor is scaled so its last nonzero coordinate is 1.
    """

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[Sequence]):
        self.factors = tuple(_normalize(f) for f in factors)
        self._hash = hash(self.factors)

    @classmethod
    def affine(cls, *values) -> "ProjPoint":
        return cls(p1(v) for v in values)

    @classmethod
    def plane(cls, *coords) -> "ProjPoint":
        return cls([coords])

    def is_p1_cubed(self) -> bool:
        return len(self.factors) == 3 and all(len(f) == 2 for f in self.factors)

    def affine_values(self) -> list:
        out = []
        for f in self.factors:
            if len(f) != 2:
                raise DimensionMismatch("affine values only exist on P^1 factors")
            out.append(INF if not f[0] else f[1] / f[0])
        return out

    def on_surface(self) -> bool:
        (x0, x1), (y0, y1), (z0, z1) = self.factors
        return x0 * y0 * z0 == x1 * y1 * z1

    def on_boundary(self) -> bool:
        return any(not f[0] or not f[1] for f in self.factors)

    def sort_key(self) -> tuple:
        return tuple(tuple(v.sort_key() for v in f) for f in self.factors)

    def to_json(self) -> list:
        return [[v.to_json() for v in f] for f in self.factors]

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjPoint) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.is_p1_cubed():
            vals = self.affine_values()
            if INF not in vals and all(vals):
                return "(" + ", ".join(str(v) for v in vals) + ")"
        return "(" + ", ".join("[" + ", ".join(str(v) for v in f) + "]" for f in self.factors) + ")"

    __repr__ = __str__


class SignedMonomialMap:
    """(x_0, x_1, x_2) -> (s_0 x_{perm[0]}, s_1 x_{perm[1]}, s_2 x_{perm[2]})."""

    __slots__ = ("perm", "scalars", "_hash")

    def __init__(self, perm: Sequence[int], scalars: Sequence):
        if sorted(perm) != list(range(len(perm))) or len(scalars) != len(perm):
            raise ValueError("invalid signed monomial map")
        self.perm = tuple(perm)
        self.scalars = tuple(CycNum.coerce(s) for s in scalars)
        if any(not s for s in self.scalars):
            raise ValueError("scalars must be nonzero")
        self._hash = hash((self.perm, self.scalars))

    @classmethod
    def from_matrix(cls, m: GroupElement) -> "SignedMonomialMap":
        if not m.is_monomial():
            raise UnsupportedMap("matrix is not monomial")
        n = m.size
        perm, scal = [0] * n, [ONE] * n
        for j in range(n):
            i = next(i for i in range(n) if m.matrix[i][j])
            perm[j], scal[j] = i, m.matrix[i][j]
        return cls(perm, scal)

    def identity(self) -> "SignedMonomialMap":
        n = len(self.perm)
        return SignedMonomialMap(range(n), [ONE] * n)

    def __mul__(self, other: "SignedMonomialMap") -> "SignedMonomialMap":
        # self first, then other
        perm = [self.perm[other.perm[i]] for i in range(len(self.perm))]
        scal = [other.scalars[i] * self.scalars[other.perm[i]] for i in range(len(self.perm))]
        return SignedMonomialMap(perm, scal)

    def inverse(self) -> "SignedMonomialMap":
        n = len(self.perm)
        inv = [0] * n
        for i, j in enumerate(self.perm):
            inv[j] = i
        return SignedMonomialMap(inv, [self.scalars[inv[i]].inverse() for i in range(n)])

    def apply_affine(self, values: Sequence) -> list:
        out = []
        for i, s in enumerate(self.scalars):
            v = values[self.perm[i]]
            out.append(v if isinstance(v, str) else s * v)
        return out

    def describe(self, names: Sequence[str] = ("x", "y", "z")) -> str:
        parts = []
        for i, s in enumerate(self.scalars):
            base = names[self.perm[i]]
            parts.append(base if s == 1 else (f"-{base}" if s == -1 else f"({s})*{base}"))
        return f"({', '.join(names)}) -> ({', '.join(parts)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedMonomialMap) and self.perm == other.perm and self.scalars == other.scalars

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SignedMonomialMap[{self.describe()}]"


def act(g, p: ProjPoint) -> ProjPoint:
    """Image of p under g (right action)."""
    if isinstance(g, GroupElement):
        if len(p.factors) == 1 and len(p.factors[0]) == g.size:
            X = p.factors[0]
            return ProjPoint([[sum((X[i] * g.matrix[i][j] for i in range(g.size)), ZERO)
                               for j in range(g.size)]])
        if g.is_monomial() and len(p.factors) == g.size:
            g = SignedMonomialMap.from_matrix(g)
        else:
            raise DimensionMismatch("matrix size does not match the point")
    if isinstance(g, SignedMonomialMap):
        if len(p.factors) != len(g.perm) or any(len(f) != 2 for f in p.factors):
            raise DimensionMismatch("signed monomial map needs a point of (P^1)^n with matching n")
        return ProjPoint((p.factors[j][0], s * p.factors[j][1]) for j, s in zip(g.perm, g.scalars))
    raise UnsupportedMap(f"cannot act with {type(g).__name__}")


# ---------------------------------------------------------------------------
# invariance of the defining equation

# variables ordered x0, x1, y0, y1, z0, z1
SURFACE_EQUATION = {(1, 0, 1, 0, 1, 0): ONE, (0, 1, 0, 1, 0, 1): -ONE}


def pullback_polynomial(g: SignedMonomialMap, poly: Mapping[tuple, CycNum]) -> dict[tuple, CycNum]:
    """F(p^g) as a polynomial in the homogeneous coordinates of p."""
    out: dict[tuple, CycNum] = {}
    for mono, coeff in poly.items():
        new = [0] * 6
        c = coeff
        for i in range(3):
            src = g.perm[i]
            e0, e1 = mono[2 * i], mono[2 * i + 1]
            new[2 * src] += e0
            new[2 * src + 1] += e1
            if e1:
                c = c * g.scalars[i] ** e1
        key = tuple(new)
        out[key] = out.get(key, ZERO) + c
    return {k: v for k, v in out.items() if v}


def invariance_scalar(g: SignedMonomialMap, poly: Mapping[tuple, CycNum] = SURFACE_EQUATION) -> CycNum | None:
    pulled = pullback_polynomial(g, poly)
    if set(pulled) != set(poly):
        return None
    mono = next(iter(poly))
    lam = pulled[mono] / poly[mono]
    return lam if all(pulled[m] == lam * poly[m] for m in poly) else None


@dataclass
class InvarianceResult:
    invariant: bool
    scalars: list

    def __bool__(self) -> bool:
        return self.invariant


def surface_invariance(gens: Sequence[SignedMonomialMap]) -> InvarianceResult:
    scalars = [invariance_scalar(g) for g in gens]
    return InvarianceResult(all(s is not None for s in scalars), scalars)


# ---------------------------------------------------------------------------
# orbits and stabilizers


def _require_on_surface(p: ProjPoint) -> None:
    if not p.is_p1_cubed() or not p.on_surface():
        raise OffSurface(f"{p} is not on X1")


def orbit(p: ProjPoint, group: GroupTable) -> list[ProjPoint]:
    _require_on_surface(p)
    seen, out = set(), []
    for g in group.elements:
        q = act(g, p)
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def stabilizer(p: ProjPoint, group: GroupTable) -> GroupTable:
    _require_on_surface(p)
    return subgroup_closure(group, [g for g in group.elements if act(g, p) == p])


# ---------------------------------------------------------------------------
# fixed loci


@dataclass(frozen=True)
class Coord:
    """One affine coordinate on a fixed component: a constant or weight * t_k."""

    value: object = None  # CycNum, INF, or None when parametrized
    param: int | None = None
    weight: CycNum = ONE

    def at(self, params: Sequence) -> object:
        if self.param is None:
            return self.value
        t = params[self.param]
        if isinstance(t, str):
            return INF
        return self.weight * t


@dataclass(frozen=True)
class FixedComponent:
    """An irreducible piece of a fixed locus on X1.

    kind is "point", "curve" or "all".  Curves carry their coordinates as
    ``Coord`` entries in parameters t_0, ...; ``binomial`` is None when the
    surface equation holds identically on the cell, otherwise
    ``(exponents, constant)`` meaning prod t_k^e_k = constant.
    """

    kind: str
    coords: tuple[Coord, ...]
    nparams: int
    binomial: tuple | None = None
    boundary_points: tuple[ProjPoint, ...] = ()

    @property
    def point(self) -> ProjPoint | None:
        if self.kind != "point":
            return None
        return ProjPoint.affine(*[c.value for c in self.coords])

    @property
    def equation(self) -> str:
        if self.kind == "all":
            return "surface"
        if self.binomial is None:
            return "identically satisfied"
        exps, const = self.binomial
        lhs = " * ".join(f"t{k}^{e}" if e != 1 else f"t{k}" for k, e in enumerate(exps))
        return f"{lhs} = {const}"

    def describe(self) -> str:
        if self.kind == "point":
            return f"point {self.point}"
        if self.kind == "all":
            return "all of X1"
        names = []
        for c in self.coords:
            if c.param is None:
                names.append("oo" if c.value == INF else str(c.value))
            else:
                names.append(f"t{c.param}" if c.weight == 1 else f"({c.weight})*t{c.param}")
        return f"curve ({', '.join(names)}), {self.equation}"

    def sample_points(self, rng: random.Random, count: int = 4) -> list[ProjPoint]:
        """Points on the component; curve endpoints are always included."""
        if self.kind == "point":
            return [self.point]
        pts = list(self.boundary_points)
        if self.kind == "all":
            for _ in range(count):
                a, b = _rand_q(rng), _rand_q(rng)
                pts.append(ProjPoint.affine(a, b, 1 / (a * b)))
            return pts
        if self.binomial is None:
            vals: list = [ZERO, INF] + [_rand_q(rng) for _ in range(count)]
            for t in vals:
                pts.append(ProjPoint.affine(*[c.at([t]) for c in self.coords]))
            return pts
        (e0, e1), const = self.binomial
        for _ in range(count):
            s = _rand_q(rng)
            t0 = s**e1
            for t1 in binomial_roots(e1, CycNum.coerce(const) / t0**e0):
                pts.append(ProjPoint.affine(*[c.at([t0, t1]) for c in self.coords]))
        return pts


def _rand_q(rng: random.Random) -> CycNum:
    num = rng.choice([-1, 1]) * rng.randint(1, 9)
    return CycNum.coerce(Fraction(num, rng.randint(1, 9)))


class _WeightedUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.weight = [ONE] * n  # x_i = weight[i] * x_parent[i]
        self.pinned = [False] * n

    def find(self, i: int) -> tuple[int, CycNum]:
        w = ONE
        path = []
        while self.parent[i] != i:
            path.append(i)
            w = w * self.weight[i]
            i = self.parent[i]
        root = i
        # path compression
        acc = w
        for j in path:
            old_w = self.weight[j]
            self.parent[j] = root
            self.weight[j] = acc
            acc = acc / old_w
        return root, w

    def constrain(self, i: int, j: int, s: CycNum) -> None:
        """Impose x_i = s * x_j."""
        ri, wi = self.find(i)
        rj, wj = self.find(j)
        if ri != rj:
            # x_ri = (s * wj / wi) * x_rj
            self.parent[ri] = rj
            self.weight[ri] = s * wj / wi
            self.pinned[rj] = self.pinned[rj] or self.pinned[ri]
        elif wi != s * wj:
            self.pinned[ri] = True


@dataclass
class _Block:
    members: list[int]
    weights: list[CycNum]
    pinned: bool


def _blocks(maps: Sequence[SignedMonomialMap], n: int = 3) -> list[_Block]:
    uf = _WeightedUnionFind(n)
    for g in maps:
        for i in range(n):
            uf.constrain(i, g.perm[i], g.scalars[i])
    groups: dict[int, _Block] = {}
    for i in range(n):
        r, w = uf.find(i)
        blk = groups.setdefault(r, _Block([], [], uf.pinned[r]))
        blk.members.append(i)
        blk.weights.append(w)
    return sorted(groups.values(), key=lambda b: b.members[0])


@dataclass(frozen=True)
class AmbientCell:
    """A product cell of the fixed locus on (P^1)^3, before meeting X1."""

    fixed: tuple  # per block: 0, INF, or None for a free parameter
    free_blocks: tuple[int, ...]


def ambient_fixed_cells(maps: Sequence[SignedMonomialMap]) -> tuple[list[_Block], list[AmbientCell]]:
    blocks = _blocks(maps)
    choices = [[ZERO, INF] if b.pinned else [None] for b in blocks]
    cells = []

    def rec(k: int, acc: list):
        if k == len(blocks):
            free = tuple(i for i, v in enumerate(acc) if v is None)
            cells.append(AmbientCell(tuple(acc), free))
            return
        for v in choices[k]:
            rec(k + 1, acc + [v])

    rec(0, [])
    return blocks, cells


def _coords_for(blocks: list[_Block], fixed: Sequence, free: Sequence[int]) -> tuple[Coord, ...]:
    coords: list[Coord | None] = [None] * sum(len(b.members) for b in blocks)
    for bi, b in enumerate(blocks):
        for m, w in zip(b.members, b.weights):
            if fixed[bi] is None:
                coords[m] = Coord(param=free.index(bi), weight=w)
            else:
                coords[m] = Coord(value=fixed[bi])
    return tuple(coords)


def _cell_on_surface(blocks: list[_Block], fixed: tuple) -> list[FixedComponent]:
    free = [i for i, v in enumerate(fixed) if v is None]
    at_zero = any(v is not None and not isinstance(v, str) for v in fixed)
    at_inf = any(isinstance(v, str) for v in fixed)

    def with_value(i: int, v) -> tuple:
        new = list(fixed)
        new[i] = v
        return tuple(new)

    if at_zero and at_inf:
        coords = _coords_for(blocks, fixed, free)
        if not free:
            return [FixedComponent("point", coords, 0)]
        comp_pts = tuple(ProjPoint.affine(*[c.at([t]) for c in coords]) for t in (ZERO, INF))
        return [FixedComponent("curve", coords, len(free), None, comp_pts)]
    if at_inf:
        # x0*y0*z0 vanishes; some free coordinate block must sit at 0
        return [c for i in free for c in _cell_on_surface(blocks, with_value(i, ZERO))]
    if at_zero:
        return [c for i in free for c in _cell_on_surface(blocks, with_value(i, INF))]
    # every block free: affine part is a binomial, boundary cells handled separately
    if len(free) == 3:
        return [FixedComponent("all", _coords_for(blocks, fixed, free), 3)]
    prod_w = ONE
    for b in blocks:
        for w in b.weights:
            prod_w = prod_w * w
    exps = tuple(len(blocks[i].members) for i in free)
    const = prod_w.inverse()
    coords = _coords_for(blocks, fixed, free)
    if len(free) == 1:
        return [FixedComponent("point", tuple(Coord(value=c.at([t])) for c in coords), 0)
                for t in binomial_roots(exps[0], const)]
    boundary = []
    for i in free:
        for j in free:
            if i != j:
                cell = list(fixed)
                cell[i], cell[j] = INF, ZERO
                for comp in _cell_on_surface(blocks, tuple(cell)):
                    boundary.append(comp.point)
    return [FixedComponent("curve", coords, len(free), (exps, const), tuple(boundary))]


def common_fixed_locus(maps: Sequence[SignedMonomialMap]) -> list[FixedComponent]:
    """Points of X1 fixed by every map in ``maps``, as irreducible components."""
    for g in maps:
        if not isinstance(g, SignedMonomialMap) or len(g.perm) != 3:
            raise UnsupportedMap("fixed loci are only solved for signed monomial maps on (P^1)^3")
    blocks, cells = ambient_fixed_cells(maps)
    out: list[FixedComponent] = []
    seen_points = set()
    for cell in cells:
        for comp in _cell_on_surface(blocks, cell.fixed):
            if comp.kind == "point":
                if comp.point in seen_points:
                    continue
                seen_points.add(comp.point)
            out.append(comp)
    return out


def fixed_locus(g: SignedMonomialMap) -> list[FixedComponent]:
    return common_fixed_locus([g])


# ---------------------------------------------------------------------------
# subgroups and small orbits


def cyclic_subgroups(group: GroupTable) -> list[frozenset]:
    seen, out = set(), []
    for g in group.elements:
        h = closure([g], cap=group.order).element_set()
        if h not in seen:
            seen.add(h)
            out.append(h)
    return out


def all_subgroups(group: GroupTable) -> list[tuple[frozenset, list]]:
    """Every subgroup as (element set, generators), by joining cyclic subgroups."""
    cyclic = [(c, [next(g for g in group.elements if g in c and closure([g], cap=group.order).element_set() == c)])
              for c in cyclic_subgroups(group)]
    subs = {c: gens for c, gens in cyclic}
    frontier = list(subs)
    while frontier:
        nxt = []
        for h in frontier:
            for c, cg in cyclic:
                if c <= h:
                    continue
                gens = subs[h] + cg
                j = closure(gens, cap=group.order).element_set()
                if j not in subs:
                    subs[j] = gens
                    nxt.append(j)
        frontier = nxt
    order = {g: i for i, g in enumerate(group.elements)}
    return sorted(subs.items(), key=lambda kv: (len(kv[0]), sorted(order[g] for g in kv[0])))


@dataclass
class Orbit:
    points: tuple[ProjPoint, ...]
    labels: tuple[str, ...] = ()
    stabilizer_order: int = 0
    label: str = ""

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if not self.labels or any(not lb for lb in self.labels):
            return "?"
        return "{" + ", ".join(self.labels) + "}"

    def to_json(self) -> dict:
        return {"name": self.name, "size": self.size, "labels": list(self.labels),
                "points": [str(p) for p in self.points], "stabilizer_order": self.stabilizer_order}


@dataclass
class SmallOrbitClassification:
    bound: int
    group_order: int
    orbits: list[Orbit]
    positive_dimensional: list[tuple[int, FixedComponent]] = field(default_factory=list)
    subgroups_examined: int = 0
    strategy: str = "common fixed loci of all subgroups H with |H| * bound > |G|"

    @property
    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]

    @property
    def num_points(self) -> int:
        return sum(o.size for o in self.orbits)


def classify_small_orbits(group: GroupTable, bound: int,
                          labels: Mapping[ProjPoint, str] | None = None,
                          orbit_names: Mapping[str, str] | None = None) -> SmallOrbitClassification:
    """All orbits on X1 of size < bound.

    A point with orbit size < bound has stabilizer H with |H| > |G|/bound, so
    it is an isolated or curve point of the common fixed locus of such an H.
    """
    if labels is None:
        labels = {p: lb for lb, p in published_points().items()}
        if orbit_names is None:
            orbit_names = {lb: name for name, lbs in published_orbits().items() for lb in lbs}
    orbit_names = orbit_names or {}
    subs = [(h, gens) for h, gens in all_subgroups(group) if len(h) * bound > group.order]
    subs.sort(key=lambda kv: -len(kv[0]))
    points: list[ProjPoint] = []
    positive: list[tuple[int, FixedComponent]] = []
    for h, _ in subs:
        elems = sorted(h, key=group.index)
        for comp in common_fixed_locus(elems):
            if comp.kind == "point":
                if comp.point not in points:
                    points.append(comp.point)
            else:
                positive.append((len(h), comp))
    covered: set = set()
    orbits = []
    for p in points:
        if p in covered:
            continue
        orb = orbit(p, group)
        covered.update(orb)
        if len(orb) >= bound:
            continue
        orb = sorted(orb, key=lambda q: (labels.get(q, "~"), q.sort_key()))
        lbs = tuple(labels.get(q, "") for q in orb)
        names = {orbit_names.get(lb) for lb in lbs}
        name = names.pop() if len(names) == 1 and None not in names else ""
        orbits.append(Orbit(tuple(orb), lbs, group.order // len(orb), name))
    orbits.sort(key=lambda o: (-o.size, o.labels[0] or "~", o.points[0].sort_key()))
    return SmallOrbitClassification(bound, group.order, orbits, positive, len(subs))


# ---------------------------------------------------------------------------
# the S4 action on X1 and published points


def s4_maps(defn=None) -> dict[str, SignedMonomialMap]:
    from .matrix_groups import rho_assignment

    return {k: SignedMonomialMap.from_matrix(v) for k, v in rho_assignment(defn).items()}


def s4_action_table(defn=None) -> GroupTable:
    maps = s4_maps(defn)
    return closure(list(maps.values()), labels=list(maps))


def load_points(path: str | Path) -> dict[str, ProjPoint]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    out = {}
    for entry in obj["points"]:
        factors = [[CycNum.from_json(v) for v in f] for f in entry["factors"]]
        out[entry["label"]] = ProjPoint(factors)
    return out


def published_points(fixtures_dir: str | Path | None = None) -> dict[str, ProjPoint]:
    return load_points(fixtures_path(fixtures_dir) / "lemma13_points.json")


def published_orbits(fixtures_dir: str | Path | None = None) -> dict[str, list[str]]:
    obj = json.loads((fixtures_path(fixtures_dir) / "lemma13_points.json").read_text(encoding="utf-8"))
    out: dict[str, list[str]] = {}
    for entry in obj["points"]:
        out.setdefault(entry["orbit"], []).append(entry["label"])
    return out
