"""Sparse linear algebra over GF(2).

Columns are Python ints used as bitsets: bit ``i`` set means row ``i`` holds
a 1.  Adding two columns is XOR, i.e. symmetric difference of the row sets.
A column's pivot is its highest set bit (largest row index).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional

from .errors import NotFullRank, NotInSpan


def bits(x: int) -> list[int]:
    """Indices of the set bits of ``x`` in increasing order."""
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def from_indices(indices: Iterable[int]) -> int:
    x = 0
    for i in indices:
        x ^= 1 << i
    return x


@dataclass(frozen=True)
class Gf2Matrix:
    n_rows: int
    n_cols: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != self.n_cols:
            raise ValueError("column count mismatch")
        bound = 1 << self.n_rows
        for c in self.columns:
            if c < 0 or c >= bound:
                raise ValueError("row index out of range")

    @classmethod
    def from_column_sets(cls, n_rows: int, cols: Iterable[Iterable[int]]) -> "Gf2Matrix":
        columns = tuple(from_indices(c) for c in cols)
        return cls(n_rows, len(columns), columns)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "Gf2Matrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        columns = tuple(
            from_indices(i for i in range(n_rows) if rows[i][j] % 2) for j in range(n_cols)
        )
        return cls(n_rows, n_cols, columns)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def column_set(self, j: int) -> list[int]:
        return bits(self.columns[j])

    def to_dense(self) -> list[list[int]]:
        return [[(c >> i) & 1 for c in self.columns] for i in range(self.n_rows)]

    def select(self, cols: Iterable[int]) -> "Gf2Matrix":
        chosen = tuple(self.columns[j] for j in cols)
        return Gf2Matrix(self.n_rows, len(chosen), chosen)

    def restrict_rows(self, rows: Sequence[int]) -> "Gf2Matrix":
        """Keep only ``rows`` (renumbered 0..len(rows)-1 in the given order)."""
        cols = []
        for c in self.columns:
            cols.append(from_indices(new for new, old in enumerate(rows) if (c >> old) & 1))
        return Gf2Matrix(len(rows), len(cols), tuple(cols))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.n_cols != other.n_rows:
            raise ValueError("shape mismatch")
        out = []
        for c in other.columns:
            acc = 0
            for j in bits(c):
                acc ^= self.columns[j]
            out.append(acc)
        return Gf2Matrix(self.n_rows, other.n_cols, tuple(out))


@dataclass
class ReductionResult:
    """Outcome of a column-ordered elimination.

    ``reduced[row]`` / ``combo[row]`` hold, for the pivot whose lowest one sits
    in ``row``, the reduced column and the set of original columns (bitset)
    that sum to it.  These records let later right-hand sides be solved
    without repeating the elimination.
    """

    rank: int
    pivot_cols: list[int]
    pivot_row_of: dict[int, int]
    zero_cols: list[int]
    reduced: dict[int, int] = field(default_factory=dict, repr=False)
    combo: dict[int, int] = field(default_factory=dict, repr=False)
    zero_combo: dict[int, int] = field(default_factory=dict, repr=False)

    def reduce(self, v: int) -> tuple[int, int]:
        """Reduce ``v`` against the pivots; returns (residual, combination)."""
        acc = 0
        reduced, combo = self.reduced, self.combo
        while v:
            low = v.bit_length() - 1
            if low not in reduced:
                break
            v ^= reduced[low]
            acc ^= combo[low]
        return v, acc

    def in_span(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def gf2_reduce(M: Gf2Matrix, column_order: Optional[Sequence[int]] = None) -> ReductionResult:
    """Greedy column elimination in ``column_order`` (default: natural order)."""
    order = list(range(M.n_cols)) if column_order is None else list(column_order)
    if sorted(order) != list(range(M.n_cols)):
        raise ValueError("column_order must be a permutation of the columns")
    reduced: dict[int, int] = {}
    combo: dict[int, int] = {}
    pivot_cols: list[int] = []
    pivot_row_of: dict[int, int] = {}
    zero_cols: list[int] = []
    zero_combo: dict[int, int] = {}
    for j in order:
        v = M.columns[j]
        acc = 1 << j
        while v:
            low = v.bit_length() - 1
            hit = reduced.get(low)
            if hit is None:
                break
            v ^= hit
            acc ^= combo[low]
        if v:
            low = v.bit_length() - 1
            reduced[low] = v
            combo[low] = acc
            pivot_cols.append(j)
            pivot_row_of[j] = low
        else:
            zero_cols.append(j)
            zero_combo[j] = acc
    return ReductionResult(
        rank=len(pivot_cols),
        pivot_cols=pivot_cols,
        pivot_row_of=pivot_row_of,
        zero_cols=zero_cols,
        reduced=reduced,
        combo=combo,
        zero_combo=zero_combo,
    )


def gf2_rank(M: Gf2Matrix) -> int:
    return gf2_reduce(M).rank


def gf2_solve(A: Gf2Matrix, B: Gf2Matrix, reduction: Optional[ReductionResult] = None) -> Gf2Matrix:
    """Unique X with A X = B for A of full column rank.

    ``reduction`` may be a previous ``gf2_reduce(A)`` result to reuse.
    """
    if B.n_rows != A.n_rows:
        raise ValueError("A and B must have the same number of rows")
    red = gf2_reduce(A) if reduction is None else reduction
    if red.rank != A.n_cols:
        raise NotFullRank(f"rank {red.rank} < {A.n_cols} columns")
    out = []
    for j, b in enumerate(B.columns):
        residual, acc = red.reduce(b)
        if residual:
            raise NotInSpan(f"column {j} of B is not in the span of A")
        out.append(acc)
    return Gf2Matrix(A.n_cols, B.n_cols, tuple(out))


class IncrementalSpan:
    """Growing GF(2) span with membership tests (pivot = highest bit)."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._pivots)

    def _residual(self, v: int) -> int:
        pivots = self._pivots
        while v:
            hit = pivots.get(v.bit_length() - 1)
            if hit is None:
                return v
            v ^= hit
        return 0

    def contains(self, v: int) -> bool:
        return self._residual(v) == 0

    def add(self, v: int) -> bool:
        """Insert ``v``; returns False if it was already in the span."""
        r = self._residual(v)
        if not r:
            return False
        self._pivots[r.bit_length() - 1] = r
        return True

    def copy(self) -> "IncrementalSpan":
        other = IncrementalSpan()
        other._pivots = dict(self._pivots)
        return other
