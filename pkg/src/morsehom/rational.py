"""Exact rational matrices with fraction-free (Bareiss) elimination."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import Singular


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        data = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if data and len({len(r) for r in data}) != 1:
            raise ValueError("ragged rows")
        return cls(data)

    @classmethod
    def identity(cls, n: int, scale=1) -> "RationalMatrix":
        s = Fraction(scale)
        return cls(tuple(tuple(s if i == j else Fraction(0) for j in range(n)) for i in range(n)))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)) if self.rows else ())

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            out.append(tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols))
        return RationalMatrix(tuple(out))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))


def _integer_rows(rows) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; preserves rank and solutions row-wise."""
    out = []
    for row in rows:
        d = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * d) for x in row])
    return out


def _bareiss(M: list[list[int]], n_pivot_cols: int) -> tuple[int, list[int]]:
    """In-place fraction-free elimination over the first ``n_pivot_cols`` columns.

    Returns (rank, pivot columns). Every intermediate entry is a minor of the
    input, so the integers stay exactly divisible at each step.
    """
    n = len(M)
    width = len(M[0]) if M else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(n_pivot_cols):
        p = next((i for i in range(r, n) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pr = M[r]
        piv = pr[c]
        for i in range(r + 1, n):
            row = M[i]
            f = row[c]
            if f:
                for j in range(c + 1, width):
                    row[j] = (piv * row[j] - f * pr[j]) // prev
            else:
                for j in range(c + 1, width):
                    row[j] = (piv * row[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
        if r == n:
            break
    return r, pivots


def rational_rank(M: RationalMatrix) -> int:
    if not M.rows or not M.n_cols:
        return 0
    rows = _integer_rows(M.rows)
    rank, _ = _bareiss(rows, M.n_cols)
    return rank


def rational_solve(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    """Exact solution X of A X = B for square invertible A."""
    n = A.n_rows
    if A.n_cols != n:
        raise ValueError("A must be square")
    if B.n_rows != n:
        raise ValueError("A and B must have the same number of rows")
    if n == 0:
        return RationalMatrix(())
    k = B.n_cols
    aug = _integer_rows([a + b for a, b in zip(A.rows, B.rows)])
    rank, _ = _bareiss(aug, n)
    if rank < n or any(aug[i][i] == 0 for i in range(n)):
        raise Singular("matrix is singular")
    # back substitution on the upper-triangular integer system
    X = [[Fraction(0)] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = aug[i]
        piv = row[i]
        for j in range(k):
            acc = Fraction(row[n + j])
            for t in range(i + 1, n):
                if row[t]:
                    acc -= row[t] * X[t][j]
            X[i][j] = acc / piv
    return RationalMatrix(tuple(tuple(r) for r in X))
