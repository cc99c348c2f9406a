"""Picard lattice of the degree-6 del Pezzo surface X1 and the S4-action on it.

X1 projects to P^1 x P^1 via (x, y); that projection contracts the two curves
e = {x = 0, y = oo} and e' = {x = oo, y = 0}.  The lattice basis is
(f1, f2, e, e'), with f1 and f2 the pulled-back rulings {x = const} and
{y = const}.  Every curve in this module is described by a *locus*: a tuple
of coordinate conditions ``(coordinate, value)`` with coordinates 0, 1, 2 for
x, y, z.  Classes are derived from loci rather than typed in.

The lattice action uses the push-forward (column) convention: the matrix of
g sends the class of a curve C to the class of its image C^g.  Because the
point action is a right action, the matrix of a word g1 g2 ... gk is
M_gk ... M_g2 M_g1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact_field import CycNum, OMEGA
from .matrix_groups import S4_RELATIONS, evaluate_word, parse_relation
from .surface_action import (INF, ProjPoint, SignedMonomialMap, s4_maps,
                             surface_invariance)


class PicardError(Exception):
    pass


class NotACurve(PicardError, ValueError):
    pass


class UntaggedClass(PicardError, ValueError):
    pass


class HexagonNotPreserved(PicardError):
    pass


BASIS = ("f1", "f2", "e", "e'")
GRAM = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))
COORD_NAMES = ("x", "y", "z")
ZERO = CycNum.coerce(0)

# blown-up points of P^1 x P^1, as (x, y) affine values
BLOWN_POINTS = {"e": (ZERO, INF), "e'": (INF, ZERO)}

Locus = tuple  # tuple of (coordinate index, value) sorted by coordinate


def _is_boundary(v) -> bool:
    return v == INF or v == ZERO


def _fmt_value(v) -> str:
    return "oo" if v == INF else str(v)


def locus_str(locus: Locus) -> str:
    return "{" + ", ".join(f"{COORD_NAMES[c]} = {_fmt_value(v)}" for c, v in locus) + "}"


def make_locus(conds: Mapping[int, object] | Iterable[tuple[int, object]]) -> Locus:
    items = conds.items() if isinstance(conds, Mapping) else conds
    return tuple(sorted(((int(c), v if v == INF else CycNum.coerce(v)) for c, v in items), key=lambda cv: cv[0]))


@dataclass(frozen=True)
class DivClass:
    coords: tuple[int, int, int, int]
    tag: str | None = None
    locus: Locus | None = None

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "DivClass":
        return DivClass(tuple(k * a for a in self.coords))

    def same_class(self, other: "DivClass") -> bool:
        return self.coords == other.coords

    def __str__(self) -> str:
        terms = []
        for c, name in zip(self.coords, BASIS):
            if c:
                terms.append(f"{c}{name}" if c not in (1, -1) else ("-" if c < 0 else "") + name)
        s = " + ".join(terms).replace("+ -", "- ") or "0"
        return f"{self.tag} = {s}" if self.tag else s


def _symmetric_signature(gram: Sequence[Sequence[int]]) -> tuple[int, int]:
    """(positive, negative) counts via exact congruence diagonalization."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)

    def add(dst: int, src: int, f: Fraction) -> None:
        # row and column operation, keeps a symmetric
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            a[i][dst] += f * a[i][src]

    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][k] != 0), None)
            if j is None:
                continue
            add(k, j, Fraction(1) if a[j][j] + 2 * a[k][j] != 0 else Fraction(-1))
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if a[i][k]:
                add(i, k, -a[i][k] / p)
    return pos, neg


@dataclass(frozen=True)
class PicLattice:
    basis: tuple[str, ...] = BASIS
    gram: tuple[tuple[int, ...], ...] = GRAM
    K: DivClass = DivClass((-2, -2, 1, 1), "K")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def dot(self, a: DivClass | Sequence[int], b: DivClass | Sequence[int]) -> int:
        u = a.coords if isinstance(a, DivClass) else a
        v = b.coords if isinstance(b, DivClass) else b
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(self.rank) for j in range(self.rank))

    def signature(self) -> tuple[int, int]:
        return _symmetric_signature(self.gram)

    @property
    def anticanonical(self) -> DivClass:
        return DivClass(tuple(-c for c in self.K.coords), "-K")

    def class_of_locus(self, locus: Locus, tag: str | None = None) -> DivClass:
        return DivClass(class_of_locus(locus), tag, locus)


def class_of_locus(locus: Locus) -> tuple[int, int, int, int]:
    """Lattice coordinates of the curve on X1 cut out by the conditions in ``locus``."""
    conds = dict(locus)
    if len(conds) != len(locus) or not 1 <= len(conds) <= 2:
        raise NotACurve(f"{locus_str(locus)} is not a curve locus")
    if len(conds) == 1:
        (c, v), = conds.items()
        if _is_boundary(v):
            raise NotACurve(f"{locus_str(locus)} is reducible on X1")
        if c == 0:
            return (1, 0, 0, 0)
        if c == 1:
            return (0, 1, 0, 0)
        # z = c <=> x*y = 1/c, a (1,1)-curve through both blown points
        return (1, 1, -1, -1)
    if not all(_is_boundary(v) for v in conds.values()) or {conds[c] == INF for c in conds} != {True, False}:
        raise NotACurve(f"{locus_str(locus)} is a point, not a curve, on X1")
    if set(conds) == {0, 1}:
        xy = (conds[0], conds[1])
        for name, pt in BLOWN_POINTS.items():
            if xy == pt:
                return (0, 0, 1, 0) if name == "e" else (0, 0, 0, 1)
        raise NotACurve(f"{locus_str(locus)} is not contracted by the projection")
    # {x = c, z = d} is the strict transform of the ruling x = c, same for y
    coord = 0 if 0 in conds else 1
    val = conds[coord]
    out = [1, 0, 0, 0] if coord == 0 else [0, 1, 0, 0]
    for k, (name, pt) in enumerate(BLOWN_POINTS.items()):
        if pt[coord] == val:
            out[2 + k] -= 1
    return tuple(out)


def loci_meet(a: Locus, b: Locus) -> bool:
    """Whether two boundary-type curve loci intersect (consistent conditions)."""
    da, db = dict(a), dict(b)
    return all(da[c] == db[c] for c in set(da) & set(db))


# the hexagon: C_(a,b) = {a = oo, b = 0}
HEXAGON_PAIRS = ((0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1))


def hexagon_loci() -> list[Locus]:
    return [make_locus({a: INF, b: ZERO}) for a, b in HEXAGON_PAIRS]


@dataclass
class DP6:
    lattice: PicLattice
    hexagon: list[DivClass]

    def intersection_matrix(self) -> list[list[int]]:
        return [[self.lattice.dot(a, b) for b in self.hexagon] for a in self.hexagon]

    def geometric_adjacency(self) -> list[list[int]]:
        return [[int(i != j and loci_meet(a.locus, b.locus)) for j, b in enumerate(self.hexagon)]
                for i, a in enumerate(self.hexagon)]

    def hexagon_sum(self) -> DivClass:
        acc = DivClass((0, 0, 0, 0))
        for c in self.hexagon:
            acc = acc + c
        return acc

    def is_cycle(self) -> bool:
        m = self.intersection_matrix()
        n = len(m)
        return all(m[i][j] == (-1 if i == j else 1 if (j - i) % n in (1, n - 1) else 0)
                   for i in range(n) for j in range(n))


def build_dp6() -> DP6:
    lat = PicLattice()
    return DP6(lat, [lat.class_of_locus(loc, f"C{i + 1}") for i, loc in enumerate(hexagon_loci())])


def fiber_loci() -> list[Locus]:
    return [make_locus({0: OMEGA**i}) for i in range(3)]


def fiber_classes() -> list[DivClass]:
    lat = PicLattice()
    return [lat.class_of_locus(loc, f"E{i}") for i, loc in enumerate(fiber_loci())]


def fiber_avoids_blown_points(fiber: DivClass) -> bool:
    (c, v), = fiber.locus
    return all(pt[c] != v for pt in BLOWN_POINTS.values())


def incidence(p: ProjPoint, c: DivClass) -> bool:
    """Exact membership of p in the curve with the given tagged locus."""
    if c.locus is None:
        raise UntaggedClass(f"class {c} carries no defining locus")
    vals = p.affine_values()
    return all(vals[k] == v for k, v in c.locus)


# ---------------------------------------------------------------------------
# the induced action


def image_locus(g: SignedMonomialMap, locus: Locus) -> Locus:
    """Conditions cutting out the image of the locus under p -> p^g."""
    inv = [0] * len(g.perm)
    for i, j in enumerate(g.perm):
        inv[j] = i
    out = []
    for c, v in locus:
        i = inv[c]
        out.append((i, v if _is_boundary(v) else g.scalars[i] * v))
    return make_locus(out)


def _frac_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise PicardError("singular matrix")
        a[k], a[p] = a[p], a[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _transpose(a):
    return [list(r) for r in zip(*a)]


class LatticeElement:
    """An integer matrix on Pic, multiplied in the right-action order."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Sequence[Sequence[int]]):
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)

    def identity(self) -> "LatticeElement":
        n = len(self.matrix)
        return LatticeElement([[int(i == j) for j in range(n)] for i in range(n)])

    def __mul__(self, other: "LatticeElement") -> "LatticeElement":
        # self acts first
        return LatticeElement(_matmul(other.matrix, self.matrix))

    def inverse(self) -> "LatticeElement":
        inv = _frac_inverse(self.matrix)
        if any(x.denominator != 1 for row in inv for x in row):
            raise PicardError("matrix is not unimodular")
        return LatticeElement([[int(x) for x in row] for row in inv])

    def apply(self, c: DivClass) -> DivClass:
        return DivClass(tuple(sum(self.matrix[i][j] * c.coords[j] for j in range(4)) for i in range(4)))

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"LatticeElement({[list(r) for r in self.matrix]})"


@dataclass
class LatticeAction:
    lattice: PicLattice
    generators: dict[str, LatticeElement]
    hexagon_permutations: dict[str, tuple[int, ...]]

    def word_matrix(self, word: str | Sequence[tuple[str, int]]) -> LatticeElement:
        from .matrix_groups import parse_word

        w = parse_word(word) if isinstance(word, str) else word
        ident = LatticeElement(GRAM).identity()
        return evaluate_word(w, self.generators, ident)

    def preserves_gram(self) -> dict[str, bool]:
        g = [list(r) for r in self.lattice.gram]
        return {k: _matmul(_matmul(_transpose(m.matrix), g), m.matrix) == g for k, m in self.generators.items()}

    def fixes_K(self) -> dict[str, bool]:
        return {k: m.apply(self.lattice.K).coords == self.lattice.K.coords for k, m in self.generators.items()}

    def relation_failures(self, relations: Sequence[str] = S4_RELATIONS) -> list[str]:
        out = []
        for rel in relations:
            lhs, rhs = parse_relation(rel)
            if self.word_matrix(lhs) != self.word_matrix(rhs):
                out.append(rel)
        return out

    def hexagon_orbits(self) -> list[list[int]]:
        n = len(next(iter(self.hexagon_permutations.values()), ()))
        seen: set[int] = set()
        orbits = []
        for start in range(n):
            if start in seen:
                continue
            orb, frontier = {start}, [start]
            while frontier:
                i = frontier.pop()
                for perm in self.hexagon_permutations.values():
                    j = perm[i]
                    if j not in orb:
                        orb.add(j)
                        frontier.append(j)
            seen |= orb
            orbits.append(sorted(orb))
        return orbits


def induced_action(gens: Mapping[str, SignedMonomialMap] | None = None) -> LatticeAction:
    """Lattice action of surface automorphisms, derived from their action on the hexagon."""
    if gens is None:
        gens = s4_maps()
    inv = surface_invariance(list(gens.values()))
    if not inv:
        bad = [k for k, s in zip(gens, inv.scalars) if s is None]
        raise PicardError(f"generators {bad} do not preserve X1")
    dp6 = build_dp6()
    loci = [c.locus for c in dp6.hexagon]
    # C1..C4 form a lattice basis: f1 = C1 + C2, f2 = C3 + C4
    base = [list(col) for col in zip(*[c.coords for c in dp6.hexagon[:4]])]
    base_inv = _frac_inverse(base)
    mats, perms = {}, {}
    for name, g in gens.items():
        images = [image_locus(g, loc) for loc in loci]
        try:
            perm = tuple(loci.index(im) for im in images)
        except ValueError:
            raise HexagonNotPreserved(f"{name} does not permute the boundary hexagon") from None
        img_cols = [list(col) for col in zip(*[dp6.hexagon[j].coords for j in perm[:4]])]
        m = _matmul(img_cols, base_inv)
        if any(x.denominator != 1 for row in m for x in row):
            raise PicardError(f"{name} induces a non-integral lattice map")
        elem = LatticeElement([[int(x) for x in row] for row in m])
        for i, j in enumerate(perm):
            if elem.apply(dp6.hexagon[i]).coords != dp6.hexagon[j].coords:
                raise PicardError(f"{name}: lattice map inconsistent with the hexagon permutation")
        mats[name], perms[name] = elem, perm
    return LatticeAction(dp6.lattice, mats, perms)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {v in Z^n : rows . v = 0}.

    Column operations by unimodular matrices bring ``rows`` to echelon form;
    the trailing columns of the accumulated transform span the kernel, and
    since the transform is unimodular the span is saturated.
    """
    a = [list(r) for r in rows]
    m = len(a)
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def colop_add(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in u:
            row[dst] += k * row[src]

    pivot_col = 0
    for r in range(m):
        if pivot_col >= ncols:
            break
        while True:
            nz = [j for j in range(pivot_col, ncols) if a[r][j] != 0]
            if not nz:
                break
            j = min(nz, key=lambda j: abs(a[r][j]))
            colop_swap(pivot_col, j)
            done = True
            for j in range(pivot_col + 1, ncols):
                if a[r][j]:
                    colop_add(j, pivot_col, -(a[r][j] // a[r][pivot_col]))
                    if a[r][j]:
                        done = False
            if done:
                pivot_col += 1
                break
    basis = [tuple(u[i][j] for i in range(ncols)) for j in range(pivot_col, ncols)]
    return basis


def invariant_sublattice(action: LatticeAction) -> list[DivClass]:
    rows = []
    for m in action.generators.values():
        for i in range(4):
            rows.append([m.matrix[i][j] - int(i == j) for j in range(4)])
    basis = integer_kernel(rows, 4)
    if len(basis) == 1:
        v = basis[0]
        if action.lattice.dot(v, action.lattice.anticanonical) < 0:
            v = tuple(-x for x in v)
        basis = [v]
    return [DivClass(v) for v in basis]


def trivial_action() -> LatticeAction:
    return LatticeAction(PicLattice(), {}, {})
