"""Simplices, simplicial networks and clique complexes.

A simplex is a strictly increasing tuple of non-negative vertex ids, so the
natural tuple ordering is the canonical lexicographic order used everywhere
else in the package.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from typing import Optional

from .errors import InvalidSimplex

Simplex = tuple[int, ...]


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise InvalidSimplex("a simplex needs at least one vertex")
    if s[0] < 0:
        raise InvalidSimplex(f"negative vertex id in {s}")
    for a, b in zip(s, s[1:]):
        if a == b:
            raise InvalidSimplex(f"duplicate vertex {a} in {s}")
    return s


def dimension(s: Simplex) -> int:
    return len(s) - 1


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-1 faces, ordered by the position of the deleted vertex."""
    if len(s) <= 1:
        return []
    return [s[:p] + s[p + 1:] for p in range(len(s))]


class SimplicialNetwork:
    """Downward-closed collection of simplices, one sorted registry per dimension.

    Instances are treated as immutable once built; derived data (coface
    lookups, boundary matrices) is cached on first use.
    """

    def __init__(self, registry: Sequence[Sequence[Simplex]]):
        self.registry: tuple[tuple[Simplex, ...], ...] = tuple(
            tuple(level) for level in registry
        )
        # trailing empty levels carry no information
        while self.registry and not self.registry[-1]:
            self.registry = self.registry[:-1]
        self.index: tuple[dict[Simplex, int], ...] = tuple(
            {s: i for i, s in enumerate(level)} for level in self.registry
        )
        self._cofaces: dict[int, list[list[int]]] = {}
        self._cache: dict = {}
        self._check()

    def _check(self) -> None:
        for k, level in enumerate(self.registry):
            if len(self.index[k]) != len(level) or list(level) != sorted(level):
                raise InvalidSimplex(f"dimension {k} registry is not strictly sorted")
            for s in level:
                if len(s) != k + 1 or make_simplex(s) != s:
                    raise InvalidSimplex(f"{s} is not a valid {k}-simplex")
                if k and any(f not in self.index[k - 1] for f in faces(s)):
                    raise InvalidSimplex(f"a face of {s} is missing")

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]]) -> "SimplicialNetwork":
        levels: list[set[Simplex]] = []
        for raw in simplices:
            s = make_simplex(raw)
            stack = [s]
            while stack:
                t = stack.pop()
                k = len(t) - 1
                while len(levels) <= k:
                    levels.append(set())
                if t in levels[k]:
                    continue
                levels[k].add(t)
                stack.extend(faces(t))
        return cls([sorted(level) for level in levels])

    @property
    def top_dim(self) -> int:
        """Largest k with a registered k-simplex; -1 for the empty network."""
        return len(self.registry) - 1

    def m(self, k: int) -> int:
        if 0 <= k < len(self.registry):
            return len(self.registry[k])
        return 0

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.registry)

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.registry[0]] if self.registry else []

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        if 0 <= k < len(self.registry):
            return self.registry[k]
        return ()

    def __iter__(self):
        for level in self.registry:
            yield from level

    def __len__(self) -> int:
        return sum(self.counts)

    def __contains__(self, s) -> bool:
        k = len(s) - 1
        return 0 <= k < len(self.index) and tuple(s) in self.index[k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialNetwork):
            return NotImplemented
        return self.registry == other.registry

    def __hash__(self) -> int:
        return hash(self.registry)

    def __repr__(self) -> str:
        return f"SimplicialNetwork(m={self.counts})"

    def cofaces(self, k: int, i: int) -> list[int]:
        """Indices of the (k+1)-simplices having registry[k][i] as a face."""
        table = self._cofaces.get(k)
        if table is None:
            table = [[] for _ in self.simplices(k)]
            if k + 1 < len(self.registry):
                idx = self.index[k]
                for j, s in enumerate(self.registry[k + 1]):
                    for f in faces(s):
                        table[idx[f]].append(j)
            self._cofaces[k] = table
        return table[i]

    def face_indices(self, k: int, j: int) -> list[int]:
        """Row indices in registry[k-1] of the faces of registry[k][j]."""
        idx = self.index[k - 1]
        return [idx[f] for f in faces(self.registry[k][j])]


def _normalize_adjacency(adjacency: Mapping[int, Iterable[int]]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {int(v): set() for v in adjacency}
    for v, nbrs in adjacency.items():
        for w in nbrs:
            v, w = int(v), int(w)
            if v == w:
                continue
            adj.setdefault(v, set()).add(w)
            adj.setdefault(w, set()).add(v)
    return adj


def clique_complex(
    adjacency: Mapping[int, Iterable[int]], max_dim: Optional[int] = None
) -> SimplicialNetwork:
    """All cliques of an undirected graph, as a simplicial network.

    ``adjacency`` maps every vertex (isolated ones included) to its
    neighbours. Self loops are ignored and the relation is symmetrized.
    Cliques are grown by ordered-vertex expansion: a clique is only ever
    extended by a common neighbour with a larger id than all its members,
    which yields each clique exactly once.
    """
    adj = _normalize_adjacency(adjacency)
    order = sorted(adj)
    later = {v: sorted(w for w in adj[v] if w > v) for v in order}
    limit = max_dim if max_dim is not None else len(order)
    levels: list[list[Simplex]] = [[(v,) for v in order]] if order else []

    def expand(clique: Simplex, candidates: list[int]) -> None:
        k = len(clique)  # dimension of clique + (v,)
        for pos, v in enumerate(candidates):
            s = clique + (v,)
            while len(levels) <= k:
                levels.append([])
            levels[k].append(s)
            if k < limit:
                nv = adj[v]
                nxt = [w for w in candidates[pos + 1:] if w in nv]
                if nxt:
                    expand(s, nxt)

    if limit >= 1:
        for v in order:
            expand((v,), later[v])
    # depth-first emission interleaves roots; each level must be sorted
    return SimplicialNetwork([sorted(level) for level in levels])


def explicit_complex(simplices: Iterable[Iterable[int]]) -> SimplicialNetwork:
    return SimplicialNetwork.from_simplices(simplices)


def euler_characteristic(K: SimplicialNetwork) -> int:
    return sum((-1) ** k * m for k, m in enumerate(K.counts))


def skeleton_adjacency(K: SimplicialNetwork) -> dict[int, set[int]]:
    """1-skeleton of ``K`` as an adjacency mapping."""
    adj: dict[int, set[int]] = {v: set() for v in K.vertices}
    for u, v in K.simplices(1):
        adj[u].add(v)
        adj[v].add(u)
    return adj


def complete_graph(n: int) -> dict[int, set[int]]:
    return {v: {w for w in range(n) if w != v} for v in range(n)}
