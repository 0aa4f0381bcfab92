"""Spanning trees of every order, simplex classification and Morse filtrations.

For each dimension k >= 1 the k-order spanning tree is the set of pivot
columns of B_k eliminated in lexicographic order.  Non-tree k-simplices are
then split into those matched with a (k+1)-tree simplex and the
cavity-generating ones, whose number is the Betti number
beta_k = m_k - r_k - r_{k+1}.
"""

from __future__ import annotations

import heapq
import re
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from .boundary import boundary_matrix
from .complex import Simplex, SimplicialNetwork, euler_characteristic, faces
from .errors import ClassificationError, DimensionError, InvalidDecomposition, InvalidFiltration
from .gf2 import Gf2Matrix, ReductionResult, from_indices, gf2_reduce


def tree_reduction(K: SimplicialNetwork, k: int) -> ReductionResult:
    """Cached lexicographic elimination of B_k."""
    key = ("tree_reduction", k)
    red = K._cache.get(key)
    if red is None:
        red = gf2_reduce(boundary_matrix(K, k).binary)
        K._cache[key] = red
    return red


def spanning_tree(K: SimplicialNetwork, k: int) -> tuple[list[Simplex], int]:
    if not 1 <= k <= K.top_dim:
        raise DimensionError(f"k={k} outside 1..{K.top_dim}")
    red = tree_reduction(K, k)
    reg = K.registry[k]
    return [reg[j] for j in sorted(red.pivot_cols)], red.rank


def ranks(K: SimplicialNetwork) -> list[int]:
    """r_0 .. r_{l+1} with r_0 = r_{l+1} = 0."""
    l = K.top_dim
    if l < 0:
        return []
    return [0] + [tree_reduction(K, k).rank for k in range(1, l + 1)] + [0]


@dataclass(frozen=True)
class BettiVector:
    m: tuple[int, ...]
    r: tuple[int, ...]
    betti: tuple[int, ...]
    chi: int

    def __iter__(self):
        return iter(self.betti)

    def __getitem__(self, k):
        return self.betti[k]

    def __len__(self):
        return len(self.betti)


def betti_numbers(K: SimplicialNetwork) -> BettiVector:
    m = K.counts
    r = ranks(K)
    betti = tuple(m[k] - r[k] - r[k + 1] for k in range(len(m)))
    return BettiVector(m=m, r=tuple(r[1:-1]), betti=betti, chi=euler_characteristic(K))


@dataclass
class TreeDecomposition:
    """Per-dimension split of the simplices.

    ``tree[k]``, ``paired[k]`` and ``generators[k]`` are keyed by dimension;
    ``r[k]`` runs over 0..l+1.  ``promoted_faces[k]`` / ``promoted_cofaces[k]``
    record simplices that had to be made critical because no acyclic pairing
    could be scheduled; both are empty whenever c_k = beta_k is attained.
    """

    tree: dict[int, list[Simplex]]
    r: list[int]
    paired: dict[int, dict[Simplex, Simplex]]
    generators: dict[int, list[Simplex]]
    roots: list[Simplex]
    promoted_faces: dict[int, list[Simplex]] = field(default_factory=dict)
    promoted_cofaces: dict[int, list[Simplex]] = field(default_factory=dict)

    @property
    def top_dim(self) -> int:
        return len(self.r) - 2

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(len(self.generators.get(k, ())) for k in range(self.top_dim + 1))

    @property
    def n_promotions(self) -> int:
        return sum(len(v) for v in self.promoted_faces.values()) + sum(
            len(v) for v in self.promoted_cofaces.values()
        )

    def critical_counts(self) -> tuple[int, ...]:
        return tuple(
            len(self.generators.get(k, ()))
            + len(self.promoted_faces.get(k, ()))
            + len(self.promoted_cofaces.get(k, ()))
            for k in range(self.top_dim + 1)
        )


class Step(NamedTuple):
    kind: str  # "C" critical simplex, "P" (face, coface) pair
    simplices: tuple[Simplex, ...]


def _generators_by_restricted_reduction(
    K: SimplicialNetwork, k: int, tree_k: set[int], tree_k1: list[int]
) -> list[int]:
    """Non-tree k-simplices not hit by a pivot of B_{k+1}[non-tree rows, tree cols]."""
    m = K.m(k)
    nontree = [i for i in range(m) if i not in tree_k]
    if not tree_k1:
        return nontree
    pos = {old: new for new, old in enumerate(nontree)}
    cols = []
    for j in tree_k1:
        cols.append(from_indices(pos[i] for i in K.face_indices(k + 1, j) if i in pos))
    red = gf2_reduce(Gf2Matrix(len(nontree), len(cols), tuple(cols)))
    if red.rank != len(tree_k1):
        raise ClassificationError(
            f"restricted B_{k + 1} has rank {red.rank}, expected r_{k + 1} = {len(tree_k1)}"
        )
    hit = set(red.pivot_row_of.values())
    return [nontree[p] for p in range(len(nontree)) if p not in hit]


def _expand(
    K: SimplicialNetwork,
    k: int,
    to_place: list[int],
    cofaces: list[int],
    partner: Optional[dict[int, int]] = None,
) -> list[Step]:
    """Greedy schedule of (k-face, (k+1)-coface) pairs.

    Faces in ``to_place`` start absent, every other k-simplex is present.
    A coface is schedulable once exactly one of its faces is absent (and,
    with ``partner`` given, that face is its prescribed partner); the
    lexicographically smallest schedulable coface goes first.  On a stall a
    coface whose faces are all present is emitted as critical, otherwise the
    smallest absent face is.
    """
    reg_k, reg_k1 = K.registry[k], K.registry[k + 1]
    absent = set(to_place)
    unplaced = set(cofaces)
    missing = {}
    for b in cofaces:
        missing[b] = sum(1 for i in K.face_indices(k + 1, b) if i in absent)
    ready = [b for b in cofaces if missing[b] == 1]
    done = [b for b in cofaces if missing[b] == 0]
    heapq.heapify(ready)
    heapq.heapify(done)
    free_faces = sorted(to_place)
    heapq.heapify(free_faces)
    steps: list[Step] = []

    def add_face(a: int) -> None:
        absent.discard(a)
        for b in K.cofaces(k, a):
            if b in unplaced:
                missing[b] -= 1
                if missing[b] == 1:
                    heapq.heappush(ready, b)
                elif missing[b] == 0:
                    heapq.heappush(done, b)

    while unplaced:
        b = None
        while ready:
            cand = heapq.heappop(ready)
            if cand not in unplaced or missing[cand] != 1:
                continue
            a = next(i for i in K.face_indices(k + 1, cand) if i in absent)
            if partner is not None and partner.get(cand) != a:
                continue
            b = cand
            break
        if b is not None:
            unplaced.discard(b)
            steps.append(Step("P", (reg_k[a], reg_k1[b])))
            add_face(a)
            continue
        while done and done[0] not in unplaced:
            heapq.heappop(done)
        if done:
            b = heapq.heappop(done)
            unplaced.discard(b)
            steps.append(Step("C", (reg_k1[b],)))
            continue
        while free_faces and free_faces[0] not in absent:
            heapq.heappop(free_faces)
        a = heapq.heappop(free_faces)
        steps.append(Step("C", (reg_k[a],)))
        add_face(a)
    for a in sorted(absent):
        steps.append(Step("C", (reg_k[a],)))
    return steps


def _traverse_tree(K: SimplicialNetwork, tree1: list[Simplex]) -> tuple[list[Simplex], list[Step]]:
    """Breadth-first traversal of the 1-tree from the lowest vertex of each component."""
    adj: dict[int, list[int]] = {v: [] for v in K.vertices}
    for u, v in tree1:
        adj[u].append(v)
        adj[v].append(u)
    for nbrs in adj.values():
        nbrs.sort()
    seen: set[int] = set()
    roots: list[Simplex] = []
    steps: list[Step] = []
    for root in sorted(adj):
        if root in seen:
            continue
        seen.add(root)
        roots.append((root,))
        steps.append(Step("C", ((root,),)))
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    steps.append(Step("P", ((w,), (min(u, w), max(u, w)))))
                    queue.append(w)
    return roots, steps


def classify(K: SimplicialNetwork) -> TreeDecomposition:
    l = K.top_dim
    if l < 0:
        return TreeDecomposition({}, [], {}, {}, [])
    r = ranks(K)
    tree_idx: dict[int, list[int]] = {
        k: sorted(tree_reduction(K, k).pivot_cols) for k in range(1, l + 1)
    }
    tree = {k: [K.registry[k][j] for j in js] for k, js in tree_idx.items()}
    roots, steps0 = _traverse_tree(K, tree.get(1, []))
    paired: dict[int, dict[Simplex, Simplex]] = {
        0: {st.simplices[0]: st.simplices[1] for st in steps0 if st.kind == "P"}
    }
    generators: dict[int, list[Simplex]] = {0: list(roots)}
    promoted_faces: dict[int, list[Simplex]] = {}
    promoted_cofaces: dict[int, list[Simplex]] = {}
    for k in range(1, l + 1):
        tk = set(tree_idx[k])
        tk1 = tree_idx.get(k + 1, [])
        gens = _generators_by_restricted_reduction(K, k, tk, tk1)
        generators[k] = [K.registry[k][i] for i in gens]
        gset = set(gens)
        to_place = [i for i in range(K.m(k)) if i not in tk and i not in gset]
        paired[k] = {}
        if k < l:
            for st in _expand(K, k, to_place, tk1):
                if st.kind == "P":
                    paired[k][st.simplices[0]] = st.simplices[1]
                elif len(st.simplices[0]) == k + 1:
                    promoted_faces.setdefault(k, []).append(st.simplices[0])
                else:
                    promoted_cofaces.setdefault(k + 1, []).append(st.simplices[0])
    decomp = TreeDecomposition(tree, r, paired, generators, roots, promoted_faces, promoted_cofaces)
    _check_partition(K, decomp)
    return decomp


def _check_partition(K: SimplicialNetwork, d: TreeDecomposition) -> None:
    l = K.top_dim
    for k in range(l + 1):
        beta = K.m(k) - d.r[k] - d.r[k + 1]
        if len(d.generators.get(k, ())) != beta:
            raise ClassificationError(
                f"dimension {k}: {len(d.generators.get(k, ()))} generators, beta = {beta}"
            )
        if k == 0:
            parts = list(d.roots) + list(d.paired.get(0, {}))
        else:
            parts = (
                list(d.tree[k])
                + list(d.paired.get(k, {}))
                + list(d.generators[k])
                + list(d.promoted_faces.get(k, ()))
            )
        if len(parts) != K.m(k) or set(parts) != set(K.registry[k]):
            raise ClassificationError(f"dimension {k}: simplices are not partitioned")
        if k + 1 <= l:
            image = list(d.paired.get(k, {}).values()) + list(d.promoted_cofaces.get(k + 1, ()))
            if len(image) != len(d.tree[k + 1]) or set(image) != set(d.tree[k + 1]):
                raise ClassificationError(f"dimension {k}: pairing image is not tree[{k + 1}]")


@dataclass
class MorseFiltration:
    steps: list[Step]
    promotions: list[Simplex] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.steps) - 1

    @property
    def value(self) -> dict[Simplex, int]:
        out = {}
        for i, st in enumerate(self.steps):
            for s in st.simplices:
                out[s] = i
        return out

    def critical(self) -> list[tuple[int, Simplex]]:
        return [(i, st.simplices[0]) for i, st in enumerate(self.steps) if st.kind == "C"]

    def critical_counts(self, top_dim: Optional[int] = None) -> tuple[int, ...]:
        crit = [len(s) - 1 for _, s in self.critical()]
        l = top_dim if top_dim is not None else max(crit, default=-1)
        return tuple(crit.count(k) for k in range(l + 1))

    def to_text(self) -> str:
        lines = []
        for i, st in enumerate(self.steps):
            lines.append(f"{i} {st.kind} " + " ".join(format_simplex(s) for s in st.simplices))
        return "\n".join(lines) + ("\n" if lines else "")


def format_simplex(s: Simplex) -> str:
    return "(" + ",".join(str(v) for v in s) + ")"


_SIMPLEX_RE = re.compile(r"\(([^()]*)\)")


def parse_morse_text(text: str) -> MorseFiltration:
    """Read the ``<index> C <simplex>`` / ``<index> P <face> <coface>`` format."""
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) < 3:
            raise InvalidFiltration(f"expected '<index> C|P <simplex>...', got {raw!r}", lineno)
        idx, kind, rest = parts
        if not idx.isdigit() or int(idx) != len(steps):
            raise InvalidFiltration(f"step index {idx!r} out of sequence (expected {len(steps)})", lineno)
        try:
            simplices = tuple(
                tuple(sorted(int(v) for v in m.group(1).split(","))) for m in _SIMPLEX_RE.finditer(rest)
            )
        except ValueError:
            raise InvalidFiltration(f"bad vertex id in {rest!r}", lineno) from None
        if kind == "C" and len(simplices) == 1:
            steps.append(Step("C", simplices))
        elif kind == "P" and len(simplices) == 2:
            a, b = simplices
            if len(b) != len(a) + 1 or not set(a) < set(b):
                raise InvalidFiltration(f"{format_simplex(b)} is not a coface of {format_simplex(a)}", lineno)
            steps.append(Step("P", simplices))
        else:
            raise InvalidFiltration(f"malformed step {raw!r}", lineno)
    return MorseFiltration(steps)


def assign_morse(K: SimplicialNetwork, decomp: Optional[TreeDecomposition] = None) -> MorseFiltration:
    """Optimal Morse filtration built from a tree decomposition.

    Order of steps: each root as a critical vertex followed by the
    breadth-first (vertex, tree edge) pairs of its component; then for
    k = 1..l the critical generators[k] followed by the scheduled
    (k-simplex, (k+1)-tree simplex) pairs.  Both members of a pair receive the
    index of the step as their value.
    """
    if K.top_dim < 0:
        return MorseFiltration([])
    if decomp is None:
        decomp = classify(K)
    _check_consistent(K, decomp)
    l = K.top_dim
    roots, steps = _traverse_tree(K, decomp.tree.get(1, []))
    if roots != decomp.roots:
        raise InvalidDecomposition("roots do not match the traversal of tree[1]")
    promotions: list[Simplex] = []
    for k in range(1, l + 1):
        steps.extend(Step("C", (g,)) for g in decomp.generators[k])
        if k == l:
            break
        idx_k, idx_k1 = K.index[k], K.index[k + 1]
        partner = {idx_k1[b]: idx_k[a] for a, b in decomp.paired[k].items()}
        to_place = [idx_k[a] for a in decomp.paired[k]] + [
            idx_k[a] for a in decomp.promoted_faces.get(k, ())
        ]
        cofaces = sorted(idx_k1[b] for b in decomp.tree[k + 1])
        for st in _expand(K, k, to_place, cofaces, partner):
            if st.kind == "C":
                promotions.append(st.simplices[0])
            steps.append(st)
    return MorseFiltration(steps, promotions)


def _check_consistent(K: SimplicialNetwork, d: TreeDecomposition) -> None:
    if d.top_dim != K.top_dim:
        raise InvalidDecomposition("decomposition dimension does not match the network")
    for k, pairs in d.paired.items():
        for a, b in pairs.items():
            if a not in K or b not in K or a not in faces(b):
                raise InvalidDecomposition(f"{a} -> {b} is not a face/coface pair of the network")
    try:
        _check_partition(K, d)
    except ClassificationError as exc:
        raise InvalidDecomposition(str(exc)) from exc


@dataclass
class ValidationReport:
    n_up: dict[Simplex, int]
    n_down: dict[Simplex, int]
    critical: list[Simplex]
    c: tuple[int, ...]
    alt_m: int
    alt_c: int
    alt_betti: int
    violations: list[str]
    promotions: int = 0

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_morse(
    K: SimplicialNetwork, f: Union[MorseFiltration, dict[Simplex, float]]
) -> ValidationReport:
    """Check the discrete Morse conditions and the filtration property of ``f``.

    #U(s) counts cofaces t of s with f(t) <= f(s); #V(s) counts faces t with
    f(t) >= f(s).  A simplex is critical when both are zero.
    """
    promotions = 0
    if isinstance(f, MorseFiltration):
        promotions = len(f.promotions)
        values = f.value
    else:
        values = dict(f)
    violations: list[str] = []
    missing = [s for s in K if s not in values]
    if missing:
        violations.append(f"{len(missing)} simplices without a value, e.g. {missing[0]}")
    extra = [s for s in values if s not in K]
    if extra:
        violations.append(f"{len(extra)} valued simplices not in the network, e.g. {extra[0]}")
    n_up = {s: 0 for s in K}
    n_down = {s: 0 for s in K}
    for s in K:
        if s not in values:
            continue
        fs = values[s]
        for t in faces(s):
            if t not in values:
                continue
            if values[t] >= fs:
                n_down[s] += 1
                n_up[t] += 1
            if values[t] > fs:
                violations.append(f"face {t} enters after {s}")
    for s in K:
        if n_up[s] > 1:
            violations.append(f"#U{s} = {n_up[s]} > 1")
        if n_down[s] > 1:
            violations.append(f"#V{s} = {n_down[s]} > 1")
    critical = [s for s in K if n_up[s] == 0 and n_down[s] == 0]
    l = K.top_dim
    c = tuple(sum(1 for s in critical if len(s) == k + 1) for k in range(l + 1))
    b = betti_numbers(K)
    alt = lambda xs: sum((-1) ** k * x for k, x in enumerate(xs))
    report = ValidationReport(
        n_up=n_up,
        n_down=n_down,
        critical=critical,
        c=c,
        alt_m=alt(K.counts),
        alt_c=alt(c),
        alt_betti=alt(b.betti),
        violations=violations,
        promotions=promotions,
    )
    if not violations and report.alt_c != report.alt_m:
        violations.append(f"critical alternating sum {report.alt_c} != chi {report.alt_m}")
    return report
