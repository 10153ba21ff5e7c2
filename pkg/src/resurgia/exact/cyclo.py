"""Arithmetic in Z[x]/(x^p + 1) (tensored with Q), x standing for e^(i pi/p).

Elements are stored as length-p coefficient tuples.  The ring has zero
divisors for composite data, so determinants use the division-free
Berkowitz recurrence instead of Bareiss elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import UniPoly


class NonRationalCharPoly(ArithmeticError):
    pass


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def ring_mul(a: Sequence, b: Sequence, p: int) -> tuple:
    out = [0] * p
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            k = i + j
            if k < p:
                out[k] += x * y
            else:
                out[k - p] -= x * y
    return tuple(out)


def ring_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def ring_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


class CycloElem:
    """sum_k c_k x^k with x^p = -1."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable = ()):
        cs = [_norm(c) for c in coeffs]
        if len(cs) > p:
            red = [0] * p
            for k, c in enumerate(cs):
                sign = -1 if (k // p) % 2 else 1
                red[k % p] += sign * c
            cs = red
        cs = cs + [0] * (p - len(cs))
        self.p = p
        self.coeffs = tuple(cs)

    @classmethod
    def scalar(cls, p: int, c) -> "CycloElem":
        return cls(p, [c])

    @classmethod
    def gen_power(cls, p: int, k: int, c=1) -> "CycloElem":
        """c * x^k for any integer k (x^(2p) = 1)."""
        k %= 2 * p
        sign = 1
        if k >= p:
            k -= p
            sign = -1
        cs = [0] * p
        cs[k] = sign * c
        return cls(p, cs)

    def _other(self, o) -> "CycloElem":
        if isinstance(o, CycloElem):
            if o.p != self.p:
                raise ValueError("ring mismatch")
            return o
        return CycloElem.scalar(self.p, o)

    def __add__(self, o):
        return CycloElem(self.p, ring_add(self.coeffs, self._other(o).coeffs))

    __radd__ = __add__

    def __sub__(self, o):
        return CycloElem(self.p, ring_sub(self.coeffs, self._other(o).coeffs))

    def __rsub__(self, o):
        return self._other(o) - self

    def __neg__(self):
        return CycloElem(self.p, [-c for c in self.coeffs])

    def __mul__(self, o):
        return CycloElem(self.p, ring_mul(self.coeffs, self._other(o).coeffs, self.p))

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, CycloElem):
            return self.p == o.p and self.coeffs == o.coeffs
        if isinstance(o, (int, Fraction)):
            return self.coeffs == CycloElem.scalar(self.p, o).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self):
        if not self.is_rational():
            raise NonRationalCharPoly(f"{self} has irrational components")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        import cmath

        x = cmath.exp(1j * cmath.pi / self.p)
        return sum(float(c) * x**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        terms = [f"{c}*x^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


class CycloMatrix:
    """Square matrix over Z[x]/(x^p + 1); entries are raw coefficient tuples."""

    __slots__ = ("p", "n", "rows")

    def __init__(self, p: int, rows: Sequence[Sequence]):
        self.p = p
        self.n = len(rows)
        out = []
        for r in rows:
            if len(r) != self.n:
                raise ValueError("matrix must be square")
            out.append(tuple(_as_tuple(e, p) for e in r))
        self.rows = tuple(out)

    @classmethod
    def identity(cls, p: int, n: int) -> "CycloMatrix":
        one, zero = _unit(p), (0,) * p
        return cls(p, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_int(cls, p: int, rows: Sequence[Sequence[int]]) -> "CycloMatrix":
        return cls(p, [[CycloElem.scalar(p, c) for c in r] for r in rows])

    def entry(self, i: int, j: int) -> CycloElem:
        return CycloElem(self.p, self.rows[i][j])

    def __matmul__(self, o: "CycloMatrix") -> "CycloMatrix":
        if o.p != self.p or o.n != self.n:
            raise ValueError("shape or ring mismatch")
        p, n = self.p, self.n
        zero = (0,) * p
        cols = [[o.rows[k][j] for k in range(n)] for j in range(n)]
        out = []
        for i in range(n):
            row = self.rows[i]
            new = []
            for j in range(n):
                acc = zero
                for a, b in zip(row, cols[j]):
                    if any(a) and any(b):
                        acc = ring_add(acc, ring_mul(a, b, p))
                new.append(acc)
            out.append(new)
        return CycloMatrix(p, out)

    def __sub__(self, o: "CycloMatrix") -> "CycloMatrix":
        return CycloMatrix(self.p, [[ring_sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __eq__(self, o):
        return isinstance(o, CycloMatrix) and self.p == o.p and self.rows == o.rows

    def is_zero(self) -> bool:
        return not any(any(e) for r in self.rows for e in r)

    def transpose(self) -> "CycloMatrix":
        return CycloMatrix(self.p, [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)])

    def power(self, k: int) -> "CycloMatrix":
        out = CycloMatrix.identity(self.p, self.n)
        for _ in range(k):
            out = out @ self
        return out

    def to_complex(self):
        import numpy as np

        return np.array([[CycloElem(self.p, e).to_complex() for e in r] for r in self.rows])

    def to_json(self) -> list:
        return [[[str(c) for c in e] for e in r] for r in self.rows]


def _unit(p: int) -> tuple:
    return (1,) + (0,) * (p - 1)


def _as_tuple(e, p: int) -> tuple:
    if isinstance(e, CycloElem):
        if e.p != p:
            raise ValueError("ring mismatch")
        return e.coeffs
    if isinstance(e, tuple) and len(e) == p:
        return tuple(_norm(c) for c in e)
    return CycloElem.scalar(p, e).coeffs


def berkowitz(rows: Sequence[Sequence[tuple]], p: int) -> list[tuple]:
    """Coefficients of det(t I - A), highest power first, division-free."""
    n = len(rows)
    one, zero = _unit(p), (0,) * p
    if n == 0:
        return [one]
    poly = [one, tuple(-c for c in rows[0][0])]
    for k in range(1, n):
        col = [rows[i][k] for i in range(k)]
        row = rows[k][:k]
        t = [one, tuple(-c for c in rows[k][k])]
        v = col
        for _ in range(k):
            acc = zero
            for a, b in zip(row, v):
                if any(a) and any(b):
                    acc = ring_add(acc, ring_mul(a, b, p))
            t.append(tuple(-c for c in acc))
            nv = []
            for i in range(k):
                s = zero
                for a, b in zip(rows[i][:k], v):
                    if any(a) and any(b):
                        s = ring_add(s, ring_mul(a, b, p))
                nv.append(s)
            v = nv
        new = []
        for i in range(k + 2):
            s = zero
            for j in range(max(0, i - len(t) + 1), min(i, k) + 1):
                a, b = t[i - j], poly[j]
                if any(a) and any(b):
                    s = ring_add(s, ring_mul(a, b, p))
            new.append(s)
        poly = new
    return poly


def cyclo_charpoly(M: CycloMatrix, p: int | None = None, var: str = "t") -> UniPoly:
    """det(t I - M) reduced to a rational polynomial; raises if it does not reduce."""
    if p is not None and p != M.p:
        raise ValueError("p does not match the matrix ring")
    cs = berkowitz(M.rows, M.p)
    out = []
    for e in cs:
        if any(e[1:]):
            raise NonRationalCharPoly(f"charpoly coefficient {CycloElem(M.p, e)} is not rational")
        out.append(e[0])
    return UniPoly(list(reversed(out)), var)


def cyclo_det(M: CycloMatrix) -> CycloElem:
    cs = berkowitz(M.rows, M.p)
    d = cs[-1]
    if M.n % 2:
        d = tuple(-c for c in d)
    return CycloElem(M.p, d)


__all__ = ["CycloElem", "CycloMatrix", "NonRationalCharPoly", "berkowitz", "cyclo_charpoly", "cyclo_det",
           "ring_mul", "ring_add"]
