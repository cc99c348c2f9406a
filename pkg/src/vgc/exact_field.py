"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis of Q[x]/(Phi_n(x)) and are always
reduced to the smallest conductor that contains them, so two ``CycNum``
values are equal as field elements exactly when their ``(n, coeffs)`` pairs
agree.  That makes them safe dictionary keys, which the group closure code
relies on.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]
Scalar = Union["CycNum", int, Fraction]


class FieldError(ArithmeticError):
    pass


class CycDivisionByZero(FieldError, ZeroDivisionError):
    pass


class UnsupportedRadicand(FieldError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n)[:-1]:
        num = _exact_div_monic(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div_monic(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for i, b in enumerate(den):
                num[k - dd + i] -= c * b
    if any(num[:dd]):
        raise ArithmeticError("inexact cyclotomic division")
    return quot


def _reduce(coeffs: Sequence[Fraction], n: int) -> list[Fraction]:
    """Reduce a polynomial in zeta_n modulo Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, deg - 1, -1):
        lead = c[k]
        if lead:
            for i in range(deg):
                if phi[i]:
                    c[k - deg + i] -= lead * phi[i]
    c = c[:deg]
    c.extend([Fraction(0)] * (deg - len(c)))
    return c


def _embed(coeffs: Sequence[Fraction], n: int, m: int) -> list[Fraction]:
    """Image of an element of Q(zeta_n) in Q(zeta_m), n | m."""
    step = m // n
    raw = [Fraction(0)] * (step * (len(coeffs) - 1) + 1 if coeffs else 1)
    for k, c in enumerate(coeffs):
        raw[k * step] = c
    return _reduce(raw, m)


def _solve_rational(rows: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """Solve sum_k c_k rows[k] == target exactly; None when inconsistent."""
    k = len(rows)
    width = len(target)
    # augmented system: columns are the rows vectors, one equation per coordinate
    mat = [[rows[j][i] for j in range(k)] + [target[i]] for i in range(width)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, width) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(width):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    if any(mat[i][k] != 0 for i in range(r, width)):
        return None
    sol = [Fraction(0)] * k
    for i, col in enumerate(pivots):
        sol[col] = mat[i][k]
    return sol


@lru_cache(maxsize=None)
def _subfield_basis(n: int, m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Power basis of Q(zeta_m) written inside Q(zeta_n)."""
    step = n // m
    basis = []
    for k in range(euler_phi(m)):
        raw = [Fraction(0)] * (k * step + 1)
        raw[k * step] = Fraction(1)
        basis.append(tuple(_reduce(raw, n)))
    return tuple(basis)


def _minimize(n: int, coeffs: list[Fraction]) -> tuple[int, list[Fraction]]:
    if n == 1 or not any(coeffs[1:]):
        return 1, [coeffs[0] if coeffs else Fraction(0)]
    if n % 4 == 2:
        # Q(zeta_n) = Q(zeta_{n/2}) with zeta_n = -zeta_{n/2}^((n/2 + 1)/2)
        h = n // 2
        e = (h + 1) // 2
        zeta = [Fraction(0)] * (e + 1)
        zeta[e] = Fraction(-1)
        acc = [Fraction(0)]
        power = [Fraction(1)]
        for c in coeffs:
            if c:
                acc = _padd(acc, [c * p for p in power])
            power = _reduce(_pmul(power, zeta), h)
        return _minimize(h, _reduce(acc, h))
    for m in _divisors(n)[1:-1]:
        if m % 4 == 2:
            continue
        sol = _solve_rational([list(b) for b in _subfield_basis(n, m)], coeffs)
        if sol is not None:
            return m, sol
    return n, coeffs


def _padd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return out


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] += u * v
    return out


def _pdivmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _ptrim(list(a))
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, v in enumerate(b):
            a[i + shift] -= f * v
        a = _ptrim(a)
    return q, a


def _ptrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_inverse_mod(a: list[Fraction], n: int) -> list[Fraction]:
    """Inverse of a modulo Phi_n by the extended Euclidean algorithm."""
    mod = [Fraction(c) for c in cyclotomic_poly(n)]
    r0, r1 = mod, _ptrim(list(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, [-v for v in _pmul(q, s1)])
    if len(r0) != 1:
        raise FieldError("element shares a factor with the cyclotomic polynomial")
    c = r0[0]
    return _reduce([v / c for v in s0], n)


class CycNum:
    """An element of the cyclotomic field Q(zeta_n), zeta_n = exp(2*pi*i/n)."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs: Iterable[Rational]):
        if n < 1:
            raise ValueError(f"conductor must be a positive integer, got {n}")
        vals = [Fraction(c) for c in coeffs]
        if not vals:
            vals = [Fraction(0)]
        m, red = _minimize(n, _reduce(vals, n))
        self.n = m
        self.coeffs = tuple(red)
        self._hash = hash((self.n, self.coeffs))

    @classmethod
    def _trusted(cls, n: int, coeffs: list[Fraction]) -> "CycNum":
        obj = cls.__new__(cls)
        m, red = _minimize(n, coeffs)
        obj.n = m
        obj.coeffs = tuple(red)
        obj._hash = hash((obj.n, obj.coeffs))
        return obj

    # -- conversions ---------------------------------------------------
    @classmethod
    def coerce(cls, v: Scalar) -> "CycNum":
        if isinstance(v, CycNum):
            return v
        if isinstance(v, (int, Fraction)):
            return cls._trusted(1, [Fraction(v)])
        raise TypeError(f"cannot interpret {v!r} as a cyclotomic number")

    def embed(self, m: int) -> list[Fraction]:
        """Coefficients of this element in the power basis of Q(zeta_m)."""
        if m % self.n:
            raise ValueError(f"Q(zeta_{self.n}) does not embed in Q(zeta_{m})")
        return _embed(self.coeffs, self.n, m)

    def is_zero(self) -> bool:
        return self.n == 1 and self.coeffs[0] == 0

    def is_rational(self) -> bool:
        return self.n == 1

    def to_fraction(self) -> Fraction:
        if self.n != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(complex(c) * z**k for k, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycNum":
        if isinstance(obj, (int, str)):
            return cls(1, [Fraction(obj)])
        return cls(int(obj["n"]), [Fraction(c) for c in obj["coeffs"]])

    def sort_key(self) -> tuple:
        return (self.n, self.coeffs)

    # -- arithmetic ----------------------------------------------------
    def _aligned(self, other: "CycNum") -> tuple[int, list[Fraction], list[Fraction]]:
        if self.n == other.n:
            return self.n, list(self.coeffs), list(other.coeffs)
        m = _lcm(self.n, other.n)
        return m, self.embed(m), other.embed(m)

    def __add__(self, other: Scalar) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        m, a, b = self._aligned(other)
        return CycNum._trusted(m, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._trusted(self.n, [-c for c in self.coeffs])

    def __sub__(self, other: Scalar) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "CycNum":
        return CycNum.coerce(other) - self

    def __mul__(self, other: Scalar) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        if self.n == 1 or other.n == 1:
            if self.n == 1:
                s, v = self.coeffs[0], other
            else:
                s, v = other.coeffs[0], self
            if s == 1:
                return v
            if s == 0:
                return _ZERO
            return CycNum._trusted(v.n, [s * c for c in v.coeffs])
        m, a, b = self._aligned(other)
        return CycNum._trusted(m, _reduce(_pmul(a, b), m))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise CycDivisionByZero("division by zero in a cyclotomic field")
        if self.n == 1:
            return CycNum._trusted(1, [1 / self.coeffs[0]])
        return CycNum._trusted(self.n, _poly_inverse_mod(list(self.coeffs), self.n))

    def __truediv__(self, other: Scalar) -> "CycNum":
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "CycNum":
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "CycNum":
        if e < 0:
            return self.inverse() ** (-e)
        acc = _ONE
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    # -- comparison ----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.n == 1 and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycNum({self.n}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.n == 1:
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else (f"z{self.n}" if k == 1 else f"z{self.n}^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


_ZERO = CycNum(1, [0])
_ONE = CycNum(1, [1])


def cyc_make(n: int, coeffs: Sequence[Rational]) -> CycNum:
    """Build the element sum coeffs[k] * zeta_n^k, fully reduced."""
    if n == 0:
        raise ValueError("conductor 0 is not allowed")
    return CycNum(n, coeffs)


def zeta(n: int, k: int = 1) -> CycNum:
    """The root of unity zeta_n^k."""
    k %= n
    raw = [0] * (k + 1)
    raw[k] = 1
    return CycNum(n, raw)


def cyc_arith(a: Scalar, b: Scalar, op: str) -> CycNum:
    a = CycNum.coerce(a)
    b = CycNum.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _iroot(x: int, k: int) -> int | None:
    if x < 0:
        return None
    lo, hi = 0, 1
    while hi**k <= x:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid
    return lo if lo**k == x else None


def root_of_unity_form(c: CycNum) -> tuple[Fraction, int, int] | None:
    """Write c = q * zeta_N^j with q > 0 rational; None if impossible."""
    if c.is_zero():
        return None
    N = _lcm(2, c.n)
    for j in range(N):
        q = c * zeta(N, -j)
        if q.is_rational() and q.to_fraction() > 0:
            return q.to_fraction(), N, j
    return None


def binomial_roots(k: int, c: Scalar) -> tuple[CycNum, ...]:
    """All roots of t^k = c of the form rational times root of unity.

    ``c`` must itself be a rational multiple of a root of unity.  The result
    has k elements, or none when the absolute value of c is not a k-th power
    in Q.  ``t^k = 0`` has the single root 0.
    """
    if k < 1:
        raise ValueError("exponent must be positive")
    c = CycNum.coerce(c)
    if c.is_zero():
        return (_ZERO,)
    form = root_of_unity_form(c)
    if form is None:
        raise UnsupportedRadicand(f"{c} is not a rational multiple of a root of unity")
    q, N, j = form
    num = _iroot(q.numerator, k)
    den = _iroot(q.denominator, k)
    if num is None or den is None:
        return ()
    r = Fraction(num, den)
    M = N * k
    return tuple(zeta(M, j + N * t) * r for t in range(k))


ZERO = _ZERO
ONE = _ONE
OMEGA = zeta(3)
