"""Shortening of representative cycles.

Two post-processing routes:

* ``shorten_basis`` improves a basis by local moves, each adding either the
  boundary of one (k+1)-simplex or another basis cycle that overlaps it
  heavily, keeping a move only if it makes the cycle strictly shorter.
* ``minimal_one_cavities`` rebuilds the 1-dimensional basis from the
  shortest cycles through each generator edge, growing the length bound
  until every class is represented.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from .boundary import chain_to_bits
from .cavities import CavityBasis, RepresentativeCycle, boundary_span, solve_cavities, validate_basis
from .complex import Simplex, SimplicialNetwork, faces, skeleton_adjacency
from .morse import TreeDecomposition, betti_numbers, format_simplex

BOUNDARY_ADD = "boundary"
CAVITY_ADD = "cavity"


@dataclass(frozen=True)
class ShorteningMove:
    dim: int
    cycle_id: int
    kind: str
    candidate: Union[Simplex, int]  # a (k+1)-simplex, or the index of another cycle
    before_len: int
    after_len: int

    def to_line(self) -> str:
        cand = format_simplex(self.candidate) if self.kind == BOUNDARY_ADD else str(self.candidate)
        return f"{self.dim} {self.cycle_id} {self.kind} {cand} {self.before_len} {self.after_len}"


class ShorteningError(RuntimeError):
    pass


def _cofaces_touching(K: SimplicialNetwork, k: int, members) -> list[Simplex]:
    idx = K.index[k]
    reg = K.registry[k + 1]
    found = set()
    for s in members:
        found.update(K.cofaces(k, idx[s]))
    return [reg[j] for j in sorted(found)]


def _best_move(K, k, cycles, i) -> Optional[tuple[str, Union[Simplex, int], frozenset]]:
    current = cycles[i].members
    n = len(current)
    if k + 1 <= K.top_dim:
        for tau in _cofaces_touching(K, k, current):
            new = current.symmetric_difference(faces(tau))
            if len(new) < n:
                return BOUNDARY_ADD, tau, new
    for j, other in enumerate(cycles):
        if j == i:
            continue
        shared = len(current & other.members)
        if 2 * shared > min(n, other.length):
            new = current.symmetric_difference(other.members)
            if len(new) < n:
                return CAVITY_ADD, j, new
    return None


def shorten_basis(
    K: SimplicialNetwork,
    basis: CavityBasis,
    k: int,
    max_rounds: int = 10,
    check: bool = True,
) -> tuple[CavityBasis, list[ShorteningMove]]:
    """Iteratively shorten the k-dimensional cycles of ``basis``.

    Each round visits the cycles from longest to shortest and applies to each
    the first strictly shortening move: boundary additions in lexicographic
    order of the (k+1)-simplex, then additions of another cycle sharing more
    than half of the shorter one's simplices, in basis order.  Stops at a
    fixpoint or after ``max_rounds`` rounds.  Cycles keep their generator tag
    even when a move removes the generator simplex itself.
    """
    cycles = list(basis[k])
    moves: list[ShorteningMove] = []
    betti = betti_numbers(K).betti if check else None
    for _ in range(max_rounds):
        changed = False
        order = sorted(range(len(cycles)), key=lambda i: (-cycles[i].length, i))
        for i in order:
            found = _best_move(K, k, cycles, i)
            if found is None:
                continue
            kind, cand, new = found
            before = cycles[i].length
            cycles[i] = replace(cycles[i], members=frozenset(new))
            moves.append(ShorteningMove(k, i, kind, cand, before, len(new)))
            changed = True
            if check:
                report = validate_basis(K, CavityBasis({k: cycles}), betti, dims=[k])
                if not report.valid:
                    raise ShorteningError("; ".join(report.failures))
        if not changed:
            break
    return CavityBasis({**basis.cycles, k: cycles}), moves


def _simple_paths(adj, adjset, start: int, end: int, n_edges: int, dist_to_end: dict[int, int]):
    """Simple paths start -> end with exactly ``n_edges`` edges, skipping the
    direct edge; neighbours are explored in increasing id order."""
    path = [start]
    on_path = {start}

    def walk(u: int, left: int):
        if left == 1:
            if end in adjset[u]:
                yield path + [end]
            return
        for w in adj[u]:
            if w == end or w in on_path:
                continue
            if dist_to_end.get(w, n_edges + 1) > left - 1:
                continue
            path.append(w)
            on_path.add(w)
            yield from walk(w, left - 1)
            path.pop()
            on_path.discard(w)

    if n_edges >= 2:
        yield from walk(start, n_edges)


def _bfs_dist(adj, src: int, limit: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    d = 0
    while frontier and d < limit:
        d += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def minimal_one_cavities(
    K: SimplicialNetwork, decomp: TreeDecomposition
) -> CavityBasis:
    """Shortest independent 1-cycles through the generator edges.

    For L = 3, 4, ...: each generator edge (u, v) still lacking a
    representative takes the first cycle of length L through it that is
    independent of the boundaries and of the cycles adopted so far.  Each
    generator's search is capped by the length of its tree-equation cycle,
    which is always a candidate.  If the adopted cycles already absorb a
    generator's candidates, the basis is completed from tree-equation
    cycles, so two cycles may then carry the same generator tag.
    """
    gens = list(decomp.generators.get(1, []))
    beta1 = len(gens)
    if not beta1:
        return CavityBasis()
    caps = {c.generator: c.length for c in solve_cavities(K, decomp, 1)}
    adjset = skeleton_adjacency(K)
    adj = {v: sorted(ws) for v, ws in adjset.items()}
    span = boundary_span(K, 1).copy()
    adopted: list[RepresentativeCycle] = []
    remaining = list(gens)
    L = 3
    top = max(caps.values())
    while remaining and len(adopted) < beta1 and L <= top:
        still = []
        for g in remaining:
            if len(adopted) == beta1:
                still.append(g)
                continue
            if L > caps[g]:
                still.append(g)
                continue
            u, v = g
            dist = _bfs_dist(adj, v, L)
            chosen = None
            for path in _simple_paths(adj, adjset, u, v, L - 1, dist):
                edges = frozenset(
                    (min(a, b), max(a, b)) for a, b in zip(path, path[1:])
                ) | {g}
                if span.add(chain_to_bits(K, edges)):
                    chosen = edges
                    break
            if chosen is None:
                still.append(g)
            else:
                adopted.append(RepresentativeCycle(1, g, chosen))
        remaining = still
        L += 1
    if len(adopted) < beta1:
        # cycles adopted for other generators can absorb a generator's own
        # tree cycle; the tree cycles span H_1, so completing from them works
        tree_cycle = {c.generator: c for c in solve_cavities(K, decomp, 1)}
        for g in remaining + [g for g in gens if g not in remaining]:
            if len(adopted) == beta1:
                break
            if span.add(chain_to_bits(K, tree_cycle[g].members)):
                adopted.append(tree_cycle[g])
    adopted.sort(key=lambda c: K.index[1][c.generator])
    return CavityBasis({1: adopted})
