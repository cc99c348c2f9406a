"""Finite groups generated by matrices, signed monomial maps or permutations.

Every element type used here supports ``*`` (composition in the order
"apply the left factor first", matching row vectors times matrices),
``inverse()``, ``identity()`` and hashing.  ``closure`` turns a generator list
into a ``GroupTable`` with a deterministic breadth-first element order.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exact_field import CycNum, FieldError

DEFAULT_CAP = 10000

S4_RELATIONS = (
    "sigma^2 = 1",
    "tau^3 = 1",
    "lambda1^2 = 1",
    "lambda2^2 = 1",
    "sigma tau = tau^2 sigma",
    "lambda1 lambda2 = lambda2 lambda1",
    "sigma lambda1 sigma = lambda1 lambda2",
    "sigma lambda2 sigma = lambda2",
    "tau^2 lambda1 tau = lambda1 lambda2",
    "tau^2 lambda2 tau = lambda1",
)


class GroupError(Exception):
    pass


class ClosureCapExceeded(GroupError):
    pass


class NotInGroup(GroupError, KeyError):
    pass


class SingularMatrix(GroupError, ValueError):
    pass


# ---------------------------------------------------------------------------
# element types


def _det(m: Sequence[Sequence[CycNum]]) -> CycNum:
    n = len(m)
    rows = [list(r) for r in m]
    det = CycNum.coerce(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return CycNum.coerce(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for r in range(c + 1, n):
            if rows[r][c]:
                f = rows[r][c] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    return det


def _mat_inverse(m: Sequence[Sequence[CycNum]]) -> list[list[CycNum]]:
    n = len(m)
    one, zero = CycNum.coerce(1), CycNum.coerce(0)
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise SingularMatrix("matrix is not invertible")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


class GroupElement:
    """An invertible square matrix over a cyclotomic field.

    With ``projective=True`` the matrix represents its class in PGL and is
    stored scaled so that its first nonzero entry (row-major) equals 1.
    """

    __slots__ = ("matrix", "projective", "_hash")

    def __init__(self, matrix: Iterable[Iterable], projective: bool = False, *, check: bool = True):
        rows = tuple(tuple(CycNum.coerce(v) for v in row) for row in matrix)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        if check and not _det(rows):
            raise SingularMatrix("matrix has zero determinant")
        if projective:
            lead = next(v for row in rows for v in row if v)
            if lead != 1:
                inv = lead.inverse()
                rows = tuple(tuple(v * inv for v in row) for row in rows)
        self.matrix = rows
        self.projective = projective
        self._hash = hash((rows, projective))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def identity(self) -> "GroupElement":
        n = self.size
        return GroupElement([[int(i == j) for j in range(n)] for i in range(n)], self.projective, check=False)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        a, b = self.matrix, other.matrix
        n = len(a)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = CycNum.coerce(0)
                for k in range(n):
                    if a[i][k] and b[k][j]:
                        acc = acc + a[i][k] * b[k][j]
                row.append(acc)
            out.append(row)
        return GroupElement(out, self.projective or other.projective, check=False)

    def inverse(self) -> "GroupElement":
        return GroupElement(_mat_inverse(self.matrix), self.projective, check=False)

    def __pow__(self, e: int) -> "GroupElement":
        return power(self, e)

    def as_projective(self) -> "GroupElement":
        return self if self.projective else GroupElement(self.matrix, True, check=False)

    def det(self) -> CycNum:
        return _det(self.matrix)

    def is_monomial(self) -> bool:
        return all(sum(1 for v in row if v) == 1 for row in self.matrix) and all(
            sum(1 for row in self.matrix if row[j]) == 1 for j in range(self.size)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.projective == other.projective
            and self.matrix == other.matrix
        )

    def __hash__(self) -> int:
        return self._hash

    def to_json(self) -> list:
        return [[v.to_json() for v in row] for row in self.matrix]

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(v) for v in row) for row in self.matrix)
        return f"{'PGL' if self.projective else 'GL'}[{body}]"


class Perm:
    """A permutation of {0, ..., n-1}; ``p * q`` applies p first."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {images}")

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm([other.images[i] for i in self.images])

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def identity(self) -> "Perm":
        return Perm(range(len(self.images)))

    def sign(self) -> int:
        seen, s = set(), 1
        for i in range(len(self.images)):
            if i in seen:
                continue
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = self.images[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm{self.images}"


# ---------------------------------------------------------------------------
# group tables


@dataclass
class GroupTable:
    """A finite group as an explicit element list.

    ``elements[0]`` is the identity; ``words[i]`` is a shortest word (as
    generator indices) whose product is ``elements[i]``.
    """

    elements: list
    generators: list[int]
    words: list[tuple[int, ...]]
    generator_labels: list[str] = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._index

    @property
    def identity(self):
        return self.elements[0]

    def index(self, g) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise NotInGroup(f"element not in group: {g!r}") from None

    def generator_elements(self) -> list:
        return [self.elements[i] for i in self.generators]

    def label(self, i: int) -> str:
        if not self.words[i]:
            return "1"
        names = self.generator_labels or [f"g{k}" for k in range(len(self.generators))]
        return "*".join(names[k] for k in self.words[i])

    def element_set(self) -> frozenset:
        return frozenset(self.elements)


class PermGroup(GroupTable):
    @property
    def degree(self) -> int:
        return len(self.elements[0].images)


def closure(generators: Sequence, cap: int = DEFAULT_CAP, labels: Sequence[str] | None = None,
            table_cls: type = GroupTable) -> GroupTable:
    """Enumerate the group generated by ``generators``.

    Elements come out in breadth-first order by word length; within a word
    length, words are ordered lexicographically in the generator indices.
    Raises ``ClosureCapExceeded`` instead of truncating.
    """
    gens = list(generators)
    if not gens:
        raise GroupError("need at least one generator")
    ident = gens[0].identity()
    elements = [ident]
    words: list[tuple[int, ...]] = [()]
    index = {ident: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for k, g in enumerate(gens):
                h = elements[i] * g
                if h not in index:
                    if len(elements) >= cap:
                        raise ClosureCapExceeded(f"group not closed within cap {cap}")
                    index[h] = len(elements)
                    elements.append(h)
                    words.append(words[i] + (k,))
                    nxt.append(index[h])
        frontier = nxt
    gen_idx = [index[g] for g in gens]
    return table_cls(elements, gen_idx, words, list(labels or []), index)


def perm_group(generators: Sequence[Perm], labels: Sequence[str] | None = None) -> PermGroup:
    return closure(generators, labels=labels, table_cls=PermGroup)


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return perm_group([Perm(range(max(n, 1)))])
    return perm_group([Perm.from_cycles(n, [0, 1]), Perm.from_cycles(n, list(range(n)))])


def alternating_group(n: int) -> PermGroup:
    gens = [Perm.from_cycles(n, [0, 1, k]) for k in range(2, n)]
    return perm_group(gens)


def cyclic_group(n: int) -> PermGroup:
    return perm_group([Perm.from_cycles(n, list(range(n)))])


def subgroup_closure(table: GroupTable, gens: Iterable) -> GroupTable:
    gens = list(gens)
    for g in gens:
        table.index(g)
    if not gens:
        gens = [table.identity]
    return closure(gens, cap=table.order)


# ---------------------------------------------------------------------------
# words and presentations


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


def parse_word(text: str) -> list[tuple[str, int]]:
    """Parse "tau^2 lambda1 tau" into [("tau", 2), ("lambda1", 1), ("tau", 1)]."""
    out = []
    for tok in text.replace("*", " ").split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"malformed word token {tok!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return out


def parse_relation(text: str) -> tuple[list[tuple[str, int]], list[tuple[str, int]]]:
    if "=" in text:
        lhs, rhs = text.split("=", 1)
    else:
        lhs, rhs = text, "1"
    return parse_word(lhs), parse_word(rhs)


def power(g, e: int):
    base = g if e >= 0 else g.inverse()
    acc = g.identity()
    for _ in range(abs(e)):
        acc = acc * base
    return acc


def evaluate_word(word: Sequence[tuple[str, int]], assignment: Mapping[str, object], identity):
    acc = identity
    for sym, exp in word:
        if sym not in assignment:
            raise KeyError(f"unknown generator symbol {sym!r}")
        acc = acc * power(assignment[sym], exp)
    return acc


@dataclass
class PresentationResult:
    ok: bool
    relations_hold: bool
    generates: bool
    failures: list[dict]

    def __bool__(self) -> bool:
        return self.ok


def verify_presentation(table: GroupTable, assignment: Mapping[str, object],
                        relations: Sequence[str] = S4_RELATIONS) -> PresentationResult:
    """Check each relation on the assigned elements and that they generate ``table``."""
    ident = table.identity
    failures = []
    for rel in relations:
        lhs, rhs = parse_relation(rel)
        left = evaluate_word(lhs, assignment, ident)
        right = evaluate_word(rhs, assignment, ident)
        if left != right:
            failures.append({"relation": rel, "lhs": repr(left), "rhs": repr(right)})
    relations_hold = not failures
    outside = [g for g in assignment.values() if g not in table]
    if outside:
        failures.append({"relation": "membership", "elements": [repr(g) for g in outside]})
        return PresentationResult(False, relations_hold, False, failures)
    generated = closure(list(assignment.values()), cap=table.order).order
    generates = generated == table.order
    if not generates:
        failures.append({"relation": "generation", "generated_order": generated, "order": table.order})
    return PresentationResult(relations_hold and generates, relations_hold, generates, failures)


# ---------------------------------------------------------------------------
# subgroup queries


@dataclass
class SubgroupInfo:
    order: int
    index: int
    normal: bool
    elements: frozenset

    def as_dict(self) -> dict:
        return {"order": self.order, "index": self.index, "normal": self.normal}


def is_normal(table: GroupTable, sub: Iterable) -> bool:
    sub = frozenset(sub)
    for g in table.generator_elements():
        gi = g.inverse()
        for h in sub:
            if gi * h * g not in sub:
                return False
    return True


def subgroup_info(table: GroupTable, gens: Iterable) -> SubgroupInfo:
    sub = subgroup_closure(table, gens)
    elems = sub.element_set()
    for h in elems:
        table.index(h)
    return SubgroupInfo(sub.order, table.order // sub.order, is_normal(table, elems), elems)


def _as_set(table: GroupTable, h) -> frozenset:
    elems = h.element_set() if isinstance(h, GroupTable) else frozenset(h)
    for g in elems:
        if g not in table:
            raise NotInGroup(f"{g!r} is not an element of the ambient group")
    try:
        closed = closure(list(elems) or [table.identity], cap=len(elems)).order == len(elems)
    except ClosureCapExceeded:
        closed = False
    if not closed:
        raise GroupError("input is not a subgroup")
    return elems


def semidirect_check(table: GroupTable, h1, h2) -> bool:
    """True iff table = h1 ⋉ h2 with h2 the normal factor."""
    a = _as_set(table, h1)
    b = _as_set(table, h2)
    return is_normal(table, b) and a & b == {table.identity} and len(a) * len(b) == table.order


def conjugacy_classes(group: GroupTable) -> list[list]:
    """Partition into conjugacy classes, ordered by first element appearance."""
    seen: set = set()
    classes = []
    inverses = [g.inverse() for g in group.elements]
    for h in group.elements:
        if h in seen:
            continue
        cls = []
        members = set()
        for g, gi in zip(group.elements, inverses):
            c = gi * h * g
            if c not in members:
                members.add(c)
                cls.append(c)
        seen |= members
        classes.append(cls)
    return classes


def class_sizes(group: GroupTable) -> list[int]:
    return [len(c) for c in conjugacy_classes(group)]


def normal_subgroup_orders(group: GroupTable) -> set[int]:
    """Orders of all normal subgroups, found as closed unions of classes."""
    classes = conjugacy_classes(group)
    ident_cls, rest = classes[0], classes[1:]
    orders = set()
    for mask in range(1 << len(rest)):
        chosen = [c for k, c in enumerate(rest) if mask >> k & 1]
        size = 1 + sum(len(c) for c in chosen)
        if group.order % size:
            continue
        union = set(ident_cls)
        for c in chosen:
            union.update(c)
        if all(a * b in union for a in union for b in union):
            orders.add(size)
    return orders


def commutator_subgroup(group: GroupTable) -> GroupTable:
    comms = {g.inverse() * h.inverse() * g * h for g in group.elements for h in group.elements}
    return closure(sorted(comms, key=lambda c: group.index(c)), cap=group.order)


def abelianization_order(group: GroupTable) -> int:
    return group.order // commutator_subgroup(group).order


def char_degree_multisets(order: int, num_classes: int, abelianization_order: int) -> list[tuple[int, ...]]:
    """Multisets of irreducible degrees compatible with the counting constraints.

    Each multiset has ``num_classes`` entries, squares summing to ``order``,
    entries dividing ``order``, and exactly ``abelianization_order`` ones.
    """
    ones = abelianization_order
    if ones > num_classes or ones > order:
        return []
    remaining = order - ones
    slots = num_classes - ones
    cands = [d for d in range(2, int(order**0.5) + 1) if order % d == 0]
    out: list[tuple[int, ...]] = []

    def rec(start: int, left: int, slots_left: int, acc: list[int]):
        if slots_left == 0:
            if left == 0:
                out.append(tuple([1] * ones + acc))
            return
        for pos in range(start, len(cands)):
            d = cands[pos]
            if d * d * slots_left > left:
                break
            rec(pos, left - d * d, slots_left - 1, acc + [d])

    rec(0, remaining, slots, [])
    return out


def conjugation_transport(table: GroupTable, t: GroupElement,
                          assignment: Mapping[str, tuple[GroupElement, GroupElement]]) -> bool:
    """True iff x -> t x t^-1 sends each source generator to its assigned target.

    ``assignment`` maps a symbol to ``(source, target)``; targets must lie in
    ``table``.  Comparison is in PGL.
    """
    tp = t.as_projective()
    tinv = tp.inverse()
    for src, dst in assignment.values():
        dst = dst.as_projective()
        if dst not in table:
            return False
        if tp * src.as_projective() * tinv != dst:
            return False
    return True


# ---------------------------------------------------------------------------
# fixtures


FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass
class GroupDefinition:
    name: str
    projective: bool
    cyclotomic_order: int
    generators: list[GroupElement]
    labels: list[str]

    def generator(self, label: str) -> GroupElement:
        return self.generators[self.labels.index(label)]

    def closure(self, cap: int = DEFAULT_CAP) -> GroupTable:
        return closure(self.generators, cap=cap, labels=self.labels)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "projective": self.projective,
            "cyclotomic_order": self.cyclotomic_order,
            "generators": [g.to_json() for g in self.generators],
            "labels": list(self.labels),
        }


class FixtureError(ValueError):
    pass


def parse_group_definition(text: str, source: str = "<string>") -> GroupDefinition:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        projective = bool(obj["projective"])
        gens = [GroupElement([[CycNum.from_json(v) for v in row] for row in m], projective)
                for m in obj["generators"]]
        labels = list(obj.get("labels") or [f"g{k}" for k in range(len(gens))])
        return GroupDefinition(obj["name"], projective, int(obj.get("cyclotomic_order", 1)), gens, labels)
    except (KeyError, TypeError, ValueError, ZeroDivisionError, FieldError) as exc:
        raise FixtureError(f"{source}: invalid group definition: {exc}") from exc


def load_group(path: str | Path) -> GroupDefinition:
    path = Path(path)
    return parse_group_definition(path.read_text(encoding="utf-8"), str(path))


def fixtures_path(fixtures_dir: str | Path | None = None) -> Path:
    """Explicit directory, else $VGC_FIXTURES, else the packaged fixtures."""
    return Path(fixtures_dir or os.environ.get("VGC_FIXTURES") or FIXTURE_DIR)


def load_fixture_group(name: str, fixtures_dir: str | Path | None = None) -> GroupDefinition:
    if not name.endswith(".json"):
        name += ".json"
    return load_group(fixtures_path(fixtures_dir) / name)


def rho_assignment(defn: GroupDefinition | None = None) -> dict[str, GroupElement]:
    defn = defn or load_fixture_group("s4_rho.json")
    return {s: defn.generator(s) for s in ("sigma", "tau", "lambda1", "lambda2")}


def g216_assignment(defn: GroupDefinition | None = None) -> dict[str, GroupElement]:
    defn = defn or load_fixture_group("g216.json")
    return {"sigma": defn.generator("A"), "tau": defn.generator("B"),
            "lambda1": defn.generator("C1"), "lambda2": defn.generator("C2")}
