"""Exact linear algebra over Q: fraction-free echelon form, rank, nullspace."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


class SingularMatrix(ArithmeticError):
    pass


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = lcm(*[x.denominator for x in fr]) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def bareiss_echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of a rational matrix.

    Rows are first cleared of denominators; every division in the Bareiss
    update is exact.  Returns (echelon rows, pivot columns).
    """
    M = _integer_rows(rows)
    m = len(M)
    n = len(M[0]) if m else 0
    prev = 1
    r = 0
    piv: list[int] = []
    for c in range(n):
        if r == m:
            break
        k = next((i for i in range(r, m) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        pr = M[r]
        a = pr[c]
        for i in range(r + 1, m):
            row = M[i]
            b = row[c]
            if b:
                for j in range(c + 1, n):
                    num = a * row[j] - b * pr[j]
                    row[j] = num // prev
                row[c] = 0
            elif prev != 1 or a != 1:
                for j in range(c + 1, n):
                    row[j] = a * row[j] // prev
        prev = a
        piv.append(c)
        r += 1
    return M[:r], piv


def rank_q(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(bareiss_echelon(rows)[1])


def rref_q(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with unit pivots."""
    ech, piv = bareiss_echelon(rows)
    R = [[Fraction(x) for x in r] for r in ech]
    for i in range(len(R) - 1, -1, -1):
        c = piv[i]
        inv = 1 / R[i][c]
        R[i] = [x * inv for x in R[i]]
        for k in range(i):
            f = R[k][c]
            if f:
                R[k] = [x - f * y for x, y in zip(R[k], R[i])]
    return R, piv


def nullspace_q(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column (free entry = 1)."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols needed for an empty matrix")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    n = len(rows[0])
    R, piv = rref_q(rows)
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def inverse_q(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c]), None)
        if k is None:
            raise SingularMatrix("matrix is singular")
        A[c], A[k] = A[k], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def matmul_q(A, B):
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in A]


def canonical_basis(vectors: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Row-reduced canonical basis of the span (for subspace comparison)."""
    if not vectors:
        return []
    R, _ = rref_q(vectors)
    return [tuple(r) for r in R]


__all__ = ["bareiss_echelon", "rank_q", "rref_q", "nullspace_q", "inverse_q", "matmul_q", "canonical_basis",
           "SingularMatrix"]
