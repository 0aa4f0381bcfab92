"""Boundary matrices, chains, cycles and the Hodge Laplacian.

Chains carry GF(2) coefficients and are represented as frozensets of
simplices of one dimension.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .complex import Simplex, SimplicialNetwork, faces
from .errors import DimensionError
from .gf2 import Gf2Matrix
from .rational import RationalMatrix, rational_rank

Chain = frozenset


@dataclass(frozen=True)
class BoundaryMatrixBundle:
    """B_k in binary form and with orientation signs.

    ``oriented[j]`` maps row index -> sign for column ``j``; the sign of the
    face obtained by deleting vertex position p is (-1)**p.
    """

    k: int
    binary: Gf2Matrix
    oriented: tuple[dict[int, int], ...]

    def oriented_dense(self) -> list[list[int]]:
        dense = [[0] * self.binary.n_cols for _ in range(self.binary.n_rows)]
        for j, col in enumerate(self.oriented):
            for i, s in col.items():
                dense[i][j] = s
        return dense


def boundary_matrix(K: SimplicialNetwork, k: int) -> BoundaryMatrixBundle:
    if not 1 <= k <= K.top_dim:
        raise DimensionError(f"k={k} outside 1..{K.top_dim}")
    key = ("boundary", k)
    cached = K._cache.get(key)
    if cached is not None:
        return cached
    rows = K.index[k - 1]
    binary = []
    oriented = []
    for s in K.registry[k]:
        col = 0
        signs = {}
        for p, f in enumerate(faces(s)):
            i = rows[f]
            col |= 1 << i
            signs[i] = -1 if p % 2 else 1
        binary.append(col)
        oriented.append(signs)
    bundle = BoundaryMatrixBundle(k, Gf2Matrix(len(rows), len(binary), tuple(binary)), tuple(oriented))
    K._cache[key] = bundle
    return bundle


def apply_boundary(K: SimplicialNetwork, chain: Iterable[Simplex]) -> Chain:
    """Boundary of a GF(2) chain: symmetric difference of all face sets.

    The boundary of a 0-chain is the zero chain (empty set).
    """
    out: set[Simplex] = set()
    for s in chain:
        if s not in K:
            raise KeyError(f"{s} is not a simplex of the network")
        for f in faces(s):
            if f in out:
                out.remove(f)
            else:
                out.add(f)
    return frozenset(out)


def is_cycle(K: SimplicialNetwork, chain: Iterable[Simplex]) -> bool:
    return not apply_boundary(K, chain)


def chain_to_bits(K: SimplicialNetwork, chain: Iterable[Simplex]) -> int:
    x = 0
    for s in chain:
        x ^= 1 << K.index[len(s) - 1][s]
    return x


def bits_to_chain(K: SimplicialNetwork, k: int, x: int) -> Chain:
    reg = K.registry[k]
    out = []
    while x:
        low = x & -x
        out.append(reg[low.bit_length() - 1])
        x ^= low
    return frozenset(out)


def _gram(cols: tuple[dict[int, int], ...], n: int, transpose_side: bool) -> list[list[int]]:
    """B^T B (transpose_side=True, n = #cols) or B B^T (False, n = #rows)."""
    out = [[0] * n for _ in range(n)]
    if transpose_side:
        # entry (a, b) = sum_i B[i,a] B[i,b]; group by row
        by_row: dict[int, list[tuple[int, int]]] = {}
        for j, col in enumerate(cols):
            for i, s in col.items():
                by_row.setdefault(i, []).append((j, s))
        for entries in by_row.values():
            for a, sa in entries:
                ra = out[a]
                for b, sb in entries:
                    ra[b] += sa * sb
    else:
        for col in cols:
            items = list(col.items())
            for a, sa in items:
                ra = out[a]
                for b, sb in items:
                    ra[b] += sa * sb
    return out


def hodge_laplacian(K: SimplicialNetwork, k: int) -> RationalMatrix:
    """L_k = B_k^T B_k + B_{k+1} B_{k+1}^T with oriented boundary matrices."""
    m = K.m(k)
    if k < 0 or (k > K.top_dim and K.top_dim >= 0):
        raise DimensionError(f"k={k} outside 0..{K.top_dim}")
    L = [[0] * m for _ in range(m)]
    if k >= 1:
        down = _gram(boundary_matrix(K, k).oriented, m, True)
        for a in range(m):
            La, Da = L[a], down[a]
            for b in range(m):
                La[b] += Da[b]
    if k + 1 <= K.top_dim:
        up = _gram(boundary_matrix(K, k + 1).oriented, m, False)
        for a in range(m):
            La, Ua = L[a], up[a]
            for b in range(m):
                La[b] += Ua[b]
    return RationalMatrix(tuple(tuple(Fraction(x) for x in row) for row in L))


def hodge_betti(K: SimplicialNetwork, k: int) -> int:
    """Kernel dimension of the Hodge Laplacian, computed from its exact rank."""
    if k > K.top_dim or k < 0:
        return 0
    return K.m(k) - rational_rank(hodge_laplacian(K, k))
