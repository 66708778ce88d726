"""Small exact linear algebra over Q (and any exact field for determinants)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def det_bareiss(rows: Sequence[Sequence], zero=0, one=1):
    """Determinant by fraction-free (Bareiss) elimination.

    Works over any exact integral domain whose elements support exact
    division (ints, Fractions, cyclotomic numbers).
    """
    A = [list(r) for r in rows]
    n = len(A)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return zero
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                # int / int would fall back to float
                A[i][j] = Fraction(num, prev) if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = A[k][k]
    return A[-1][-1] if sign > 0 else -A[-1][-1]


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        d = lcm(1, *(x.denominator for x in fr))
        out.append([int(x * d) for x in fr])
    return out


def rank_exact(rows: Sequence[Sequence]) -> int:
    """Rank over Q via fraction-free elimination on integer-scaled rows."""
    A = _integer_rows(rows)
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][col]
        for i in range(rank + 1, m):
            a = A[i][col]
            row_r, row_i = A[rank], A[i]
            A[i] = [(row_i[j] * p - a * row_r[j]) // prev for j in range(n)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q."""
    if ncols is None:
        ncols = len(rows[0])
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_exact(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square nonsingular system ``A x = b`` over Q."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [R[i][n] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
