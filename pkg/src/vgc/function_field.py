"""Rational functions in x, y over a cyclotomic field, and the plane group acting by substitution.

A group element g acts on functions by pullback along the point map
p -> p^g, where a point [X0, X1, X2] goes to [X0, X1, X2] M_g:
``substitute(g, f) = f o phi_g``.  Since p^(gh) = (p^g)^h,
``substitute(g * h, f) == substitute(g, substitute(h, f))``.

Canonical form of a RatFunc: numerator and denominator coprime, and the
denominator's leading coefficient (lex order, x > y) equal to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact_field import CycNum, OMEGA
from .matrix_groups import GroupElement, GroupTable, closure, load_fixture_group, parse_word

ZERO = CycNum.coerce(0)
ONE = CycNum.coerce(1)


class FunctionFieldError(Exception):
    pass


class ZeroDenominator(FunctionFieldError, ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# univariate helpers over K (lists, lowest degree first)


def _u_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _u_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    while len(_u_trim(a)) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = a[k + i] - c * bi
        a.pop()
    return _u_trim(q), a


def _u_monic(a: list) -> list:
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _u_gcd(a: list, b: list) -> list:
    a, b = _u_trim(list(a)), _u_trim(list(b))
    while b:
        a, b = b, _u_divmod(a, b)[1]
    return _u_monic(a)


# ---------------------------------------------------------------------------
# bivariate polynomials


class BiPoly:
    """Polynomial in x, y; terms maps (deg_x, deg_y) to a nonzero CycNum."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            c = CycNum.coerce(v)
            if c:
                clean[(int(k[0]), int(k[1]))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading(self) -> tuple[tuple[int, int], CycNum]:
        k = max(self.terms)
        return k, self.terms[k]

    def deg_x(self) -> int:
        return max((k[0] for k in self.terms), default=-1)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + a * b
        return BiPoly(out)

    def scale(self, c) -> "BiPoly":
        c = CycNum.coerce(c)
        return BiPoly({k: v * c for k, v in self.terms.items()})

    def __pow__(self, e: int) -> "BiPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        acc, base = BiPoly.const(1), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def exact_div(self, other: "BiPoly") -> "BiPoly":
        """Quotient when ``other`` divides ``self``; raises otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        (bi, bj), bc = other.leading()
        inv = bc.inverse()
        rem, quo = dict(self.terms), {}
        while rem:
            (ai, aj) = max(rem)
            if ai < bi or aj < bj:
                raise FunctionFieldError("inexact polynomial division")
            c = rem[(ai, aj)] * inv
            sh = (ai - bi, aj - bj)
            quo[sh] = c
            for (i, j), v in other.terms.items():
                k = (i + sh[0], j + sh[1])
                nv = rem.get(k, ZERO) - c * v
                if nv:
                    rem[k] = nv
                else:
                    rem.pop(k, None)
        return BiPoly(quo)

    # view as a polynomial in x with coefficients in K[y]
    def x_coeffs(self) -> list[list]:
        out = [[] for _ in range(self.deg_x() + 1)]
        for (i, j), v in self.terms.items():
            row = out[i]
            while len(row) <= j:
                row.append(ZERO)
            row[j] = v
        return [_u_trim(r) for r in out]

    @classmethod
    def from_x_coeffs(cls, rows: Sequence[Sequence]) -> "BiPoly":
        return cls({(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v})

    def evaluate(self, x, y):
        total = None
        for (i, j), c in self.terms.items():
            t = c * x**i * y**j
            total = t if total is None else total + t
        return total if total is not None else ZERO

    def __eq__(self, other) -> bool:
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mono = "*".join(s if e == 1 else f"{s}^{e}" for s, e in zip("xy", k) if e)
            if not mono:
                parts.append(str(c) if c.is_rational() else f"({c})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append((str(c) if c.is_rational() else f"({c})") + "*" + mono)
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _content(rows: list[list]) -> list:
    g: list = []
    for r in rows:
        if r:
            g = _u_gcd(g, r) if g else _u_monic(list(r))
            if len(g) == 1:
                break
    return g


def _prim(rows: list[list]) -> tuple[list, list[list]]:
    c = _content(rows)
    if not c:
        return c, rows
    return c, [(_u_divmod(r, c)[0] if r else []) for r in rows]


def _prem(a: list[list], b: list[list]) -> list[list]:
    """Pseudo-remainder of a by b in K[y][x]."""
    a = [list(r) for r in a]
    lcb = b[-1]
    while len(a) >= len(b) and a:
        lca = a[-1]
        k = len(a) - len(b)
        new = [_u_mul(r, lcb) for r in a]
        for i, br in enumerate(b):
            new[k + i] = _u_sub(new[k + i], _u_mul(br, lca))
        new.pop()
        while new and not new[-1]:
            new.pop()
        a = new
    return a


def _u_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _u_trim(out)


def _u_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO) for i in range(n)]
    return _u_trim(out)


def poly_gcd(p: BiPoly, q: BiPoly) -> BiPoly:
    """Monic (lex leading coefficient 1) gcd in K[x, y]."""
    if p.is_zero():
        return _monic(q) if not q.is_zero() else q
    if q.is_zero():
        return _monic(p)
    if p.is_monomial() or q.is_monomial():
        mono = p if p.is_monomial() else q
        other = q if mono is p else p
        (mi, mj), _ = mono.leading()
        gi = min([mi] + [k[0] for k in other.terms])
        gj = min([mj] + [k[1] for k in other.terms])
        return BiPoly({(gi, gj): 1})
    cp, pp = _prim(p.x_coeffs())
    cq, qq = _prim(q.x_coeffs())
    c = _u_gcd(cp, cq)
    a, b = (pp, qq) if len(pp) >= len(qq) else (qq, pp)
    while len(b) > 1:
        r = _prem(a, b)
        if not r:
            break
        a, b = b, _prim(r)[1]
    else:
        b = [[ONE]]
    g = BiPoly.from_x_coeffs(b) * BiPoly.from_x_coeffs([c])
    return _monic(g)


def _monic(p: BiPoly) -> BiPoly:
    _, c = p.leading()
    return p if c == 1 else p.scale(c.inverse())


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly | None = None, *, reduce: bool = True):
        den = den if den is not None else BiPoly.const(1)
        if den.is_zero():
            raise ZeroDenominator("denominator is identically zero")
        if reduce:
            if num.is_zero():
                num, den = num, BiPoly.const(1)
            else:
                g = poly_gcd(num, den)
                if not (g.is_monomial() and g.leading() == ((0, 0), ONE)):
                    num, den = num.exact_div(g), den.exact_div(g)
                _, lc = den.leading()
                if lc != 1:
                    inv = lc.inverse()
                    num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(BiPoly.const(c))

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(BiPoly.x())

    @classmethod
    def y(cls) -> "RatFunc":
        return cls(BiPoly.y())

    @staticmethod
    def _lift(o) -> "RatFunc":
        return o if isinstance(o, RatFunc) else RatFunc.const(o)

    def __add__(self, other) -> "RatFunc":
        o = self._lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._lift(other) - self

    def __mul__(self, other) -> "RatFunc":
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of the zero function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e, reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return all(k == (0, 0) for k in self.num.terms) and all(k == (0, 0) for k in self.den.terms)

    def evaluate(self, x, y):
        d = self.den.evaluate(x, y)
        if not d:
            raise ZeroDenominator("pole at the evaluation point")
        return self.num.evaluate(x, y) / d

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            other = RatFunc.const(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        n = str(self.num)
        if self.den == BiPoly.const(1):
            return n
        d = str(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if any(ch in d for ch in "* "):
            d = f"({d})"
        return f"{n}/{d}"

    __repr__ = __str__


X = RatFunc.x()
Y = RatFunc.y()
U = X**2 / Y
V = Y**2 / X
THETA = Y / X


# ---------------------------------------------------------------------------
# substitution actions


@dataclass(frozen=True)
class SubstAction:
    """Pullback along a plane map: x -> images[0], y -> images[1]."""

    images: tuple[RatFunc, RatFunc]
    label: str = ""

    @classmethod
    def identity(cls) -> "SubstAction":
        return cls((X, Y), "1")

    @classmethod
    def from_matrix(cls, m: GroupElement, label: str = "") -> "SubstAction":
        if m.size != 3:
            raise FunctionFieldError("plane substitutions need 3x3 matrices")
        cols = []
        for j in range(3):
            col = BiPoly({(0, 0): m.matrix[0][j], (1, 0): m.matrix[1][j], (0, 1): m.matrix[2][j]})
            cols.append(col)
        if cols[0].is_zero():
            raise ZeroDenominator("X0 pulls back to zero")
        return cls((RatFunc(cols[1], cols[0]), RatFunc(cols[2], cols[0])), label)

    def __mul__(self, other: "SubstAction") -> "SubstAction":
        # (g * h) pulls back by h first, then by g
        return SubstAction(tuple(substitute(self, f) for f in other.images),
                           f"{self.label} {other.label}".strip())

    def __eq__(self, other) -> bool:
        return isinstance(other, SubstAction) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)


def substitute(g: SubstAction | GroupElement, f: RatFunc) -> RatFunc:
    if isinstance(g, GroupElement):
        g = SubstAction.from_matrix(g)
    gx, gy = g.images

    def ev(p: BiPoly) -> RatFunc:
        acc = RatFunc.const(0)
        for (i, j), c in p.terms.items():
            acc = acc + (gx**i) * (gy**j) * c
        return acc

    den = ev(f.den)
    if den.is_zero():
        raise ZeroDenominator("denominator vanishes identically after substitution")
    return ev(f.num) / den


def substitute_word(word: str | Sequence[tuple[str, int]], f: RatFunc,
                    actions: Mapping[str, SubstAction]) -> RatFunc:
    """f^(g1 g2 ... gk) = subst_g1(subst_g2(... subst_gk(f)))."""
    w = parse_word(word) if isinstance(word, str) else list(word)
    letters: list[str] = []
    for sym, e in w:
        if e < 0:
            raise FunctionFieldError("words must use nonnegative exponents")
        letters.extend([sym] * e)
    for sym in reversed(letters):
        f = substitute(actions[sym], f)
    return f


def plane_actions(defn=None) -> dict[str, SubstAction]:
    defn = defn or load_fixture_group("g216")
    return {lb: SubstAction.from_matrix(defn.generator(lb), lb) for lb in defn.labels}


# ---------------------------------------------------------------------------
# the invariant tower


UV_TABLE = {
    "A": (V, U),
    "B": (V, 1 / (U * V)),
    "C1": (-U, V),
    "C2": (-U, -V),
}


def verify_uv_table(actions: Mapping[str, SubstAction] | None = None) -> tuple[bool, dict]:
    actions = actions or plane_actions()
    rows = {}
    ok = True
    for name, (eu, ev) in UV_TABLE.items():
        gu, gv = substitute(actions[name], U), substitute(actions[name], V)
        # images are expressed in x, y; compare with the expected table entries
        match = gu == eu and gv == ev
        ok = ok and match
        rows[name] = {"u": str(gu), "v": str(gv), "expected_u": str(eu), "expected_v": str(ev), "match": match}
    return ok, rows


def h3_elements(defn=None) -> list[GroupElement]:
    defn = defn or load_fixture_group("g216")
    d1, d2 = defn.generator("D1"), defn.generator("D2")
    gen = d1 * d2 * d2
    out, g = [], gen.identity()
    while True:
        out.append(g)
        g = g * gen
        if g == gen.identity():
            break
    return out


def h2_group(defn=None) -> GroupTable:
    defn = defn or load_fixture_group("g216")
    return closure([defn.generator("D1"), defn.generator("D2")], labels=["D1", "D2"])


@dataclass
class IdentityCheck:
    statement: str
    lhs: str
    rhs: str
    holds: bool

    def to_json(self) -> dict:
        return {"statement": self.statement, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def _identity(statement: str, lhs: RatFunc, rhs: RatFunc) -> IdentityCheck:
    return IdentityCheck(statement, str(lhs), str(rhs), lhs == rhs)


def recovery_identities() -> list[IdentityCheck]:
    """The identities expressing x and y through u, v, theta, as stated and as corrected."""
    return [
        _identity("x = u*theta", X, U * THETA),
        _identity("y = theta/v", Y, THETA / V),
        _identity("y = v/theta", Y, V / THETA),
        _identity("y = u*theta^2", Y, U * THETA**2),
    ]


def tower_degrees(defn=None) -> dict:
    """Degree certificates for C(x,y) over C(u,v) and over the H2-invariants."""
    d = defn or load_fixture_group("g216")
    h3gen = SubstAction.from_matrix(d.generator("D1") * d.generator("D2") ** 2)
    theta_img = substitute(h3gen, THETA)
    eigen = theta_img == THETA * OMEGA
    cube = THETA**3 * U == V
    ids = recovery_identities()
    recovered = ids[0].holds and (ids[1].holds or ids[2].holds)
    h2 = h2_group(d)
    elems = h2.elements
    abelian = all(a * b == b * a for a in elems for b in elems)
    exponent3 = all(g * g * g == g.identity() for g in elems)
    h2_actions = [SubstAction.from_matrix(g) for g in elems]
    x3, y3 = X**3, Y**3
    h2_invariants = all(substitute(s, x3) == x3 and substitute(s, y3) == y3 for s in h2_actions)
    x3_in_uv = U**2 * V == x3 and U * V**2 == y3
    deg_uv = 3 if eigen and cube and recovered else None
    return {
        "theta_eigenvalue": {"image": str(theta_img), "expected": str(THETA * OMEGA), "holds": eigen},
        "theta_cubed_times_u_equals_v": cube,
        "recovery_identities": [i.to_json() for i in ids],
        "discrepancies": [i.statement for i in ids[:2] if not i.holds],
        "degree_over_uv": deg_uv,
        "h2_order": h2.order,
        "h2_abelian": abelian,
        "h2_exponent_3": exponent3,
        "galois_group_shape": "(Z/3)^2" if h2.order == 9 and abelian and exponent3 else "unknown",
        "h2_invariants_x3_y3": h2_invariants,
        "x3_y3_in_C(u,v)": x3_in_uv,
        "degree_over_h2_invariants": h2.order if abelian and exponent3 and h2_invariants else None,
        "tower": "C(x^3, y^3) = C(P^2)^H2 is contained in C(u, v) = C(P^2)^H3, contained in C(x, y)",
    }


def h3_fixes_uv(defn=None) -> bool:
    for g in h3_elements(defn):
        s = SubstAction.from_matrix(g)
        if substitute(s, U) != U or substitute(s, V) != V:
            return False
    return True


# identification of C(u, v) with the function field of X1: x = u, y = v, z = 1/(uv)
MATCHING = {"A": "sigma", "B": "tau", "C1": "lambda1", "C2": "lambda2"}


def identify_with_x1(actions: Mapping[str, SubstAction] | None = None, maps=None) -> tuple[bool, dict]:
    from .surface_action import s4_maps

    actions = actions or plane_actions()
    maps = maps or s4_maps()
    W = 1 / (U * V)
    coords = (U, V, W)
    rows = {}
    ok = U * V * W == RatFunc.const(1)
    for plane, surf in MATCHING.items():
        g = maps[surf]
        images = tuple(substitute(actions[plane], f) for f in coords)
        expected = tuple(coords[g.perm[i]] * g.scalars[i] for i in range(3))
        match = images == expected
        ok = ok and match
        rows[plane] = {"matched_with": surf, "surface_map": g.describe(), "images_uvw": [str(f) for f in images],
                       "expected": [str(f) for f in expected], "match": match}
    return ok, {"product_uvw": str(U * V * W), "rows": rows}


def action_compatibility(table: GroupTable | None = None, actions: Mapping[str, SubstAction] | None = None,
                         defn=None) -> dict:
    """Check substitution by each element's matrix equals the composite along its word."""
    defn = defn or load_fixture_group("g216")
    table = table or defn.closure()
    actions = actions or {lb: SubstAction.from_matrix(g, lb) for lb, g in zip(defn.labels, table.generator_elements())}
    gen_labels = table.generator_labels or list(defn.labels)
    word_index = {w: i for i, w in enumerate(table.words)}
    failures = []
    by_word: dict[int, SubstAction] = {}
    for idx, (g, word) in enumerate(zip(table.elements, table.words)):
        direct = SubstAction.from_matrix(g)
        if not word:
            composed = SubstAction.identity()
        else:
            # words are built left to right, so the prefix is already known
            composed = by_word[word_index[tuple(word[:-1])]] * actions[gen_labels[word[-1]]]
        by_word[idx] = composed
        if composed != direct:
            failures.append({"element": idx, "word": [gen_labels[i] for i in word]})
    return {"elements": table.order, "failures": failures, "ok": not failures}
