"""Representative cycles of all cavities from the spanning-tree equations.

For a generator g of dimension k the representative is g plus the tree
simplices whose columns of B_k sum to the column of g; the coefficients are
the unique solution of (tree columns) x = (generator column) over GF(2).
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .boundary import Chain, apply_boundary, boundary_matrix, bits_to_chain, chain_to_bits
from .complex import Simplex, SimplicialNetwork
from .errors import NotInSpan, OrientedReductionUndefined
from .gf2 import IncrementalSpan
from .morse import TreeDecomposition, betti_numbers, classify, format_simplex, tree_reduction
from .rational import RationalMatrix, rational_solve


@dataclass(frozen=True)
class RepresentativeCycle:
    dim: int
    generator: Simplex
    members: Chain

    @property
    def length(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[Simplex]:
        return sorted(self.members)


@dataclass
class CavityBasis:
    cycles: dict[int, list[RepresentativeCycle]] = field(default_factory=dict)

    def __getitem__(self, k: int) -> list[RepresentativeCycle]:
        return self.cycles.get(k, [])

    def lengths(self, k: int) -> list[int]:
        return [c.length for c in self[k]]

    def histogram(self, k: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.lengths(k):
            out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))

    def to_structured(self) -> dict:
        return {
            "format": "cavities",
            "version": 1,
            "dimensions": {
                str(k): [
                    {
                        "generator": list(c.generator),
                        "length": c.length,
                        "simplices": [list(s) for s in c.sorted_members()],
                    }
                    for c in cycles
                ]
                for k, cycles in sorted(self.cycles.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_structured(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = []
        for k, cycles in sorted(self.cycles.items()):
            for c in cycles:
                body = ";".join(format_simplex(s) for s in c.sorted_members())
                lines.append(f"{k} {format_simplex(c.generator)} : {body}")
        return "\n".join(lines) + ("\n" if lines else "")


def solve_cavities(
    K: SimplicialNetwork, decomp: TreeDecomposition, k: int
) -> list[RepresentativeCycle]:
    gens = decomp.generators.get(k, [])
    if not gens or k < 1:
        return []
    # the lexicographic elimination of B_k is the tree reduction from classify
    red = tree_reduction(K, k)
    B = boundary_matrix(K, k).binary
    idx = K.index[k]
    out = []
    for g in gens:
        j = idx[g]
        residual, acc = red.reduce(B.columns[j])
        if residual:
            raise NotInSpan(f"generator {g} is not spanned by the {k}-tree")
        members = bits_to_chain(K, k, acc | (1 << j))
        out.append(RepresentativeCycle(k, g, members))
    return out


def solve_all(K: SimplicialNetwork, decomp: Optional[TreeDecomposition] = None) -> CavityBasis:
    if decomp is None:
        decomp = classify(K)
    basis = CavityBasis()
    for k in range(1, K.top_dim + 1):
        cycles = solve_cavities(K, decomp, k)
        if cycles:
            basis.cycles[k] = cycles
    return basis


def oriented_coefficients(
    K: SimplicialNetwork, decomp: TreeDecomposition, k: int
) -> list[dict[Simplex, Fraction]]:
    """Rational tree coefficients from the oriented normal equations.

    Solves (T^T T) x = T^T c exactly, T and c being oriented columns of the
    tree simplices and of each generator.  Entries are returned before any
    reduction mod 2, so repeated simplices show up as coefficients of
    magnitude > 1.
    """
    gens = decomp.generators.get(k, [])
    if not gens or k < 1:
        return []
    tree = decomp.tree[k]
    bundle = boundary_matrix(K, k)
    idx = K.index[k]
    tcols = [bundle.oriented[idx[t]] for t in tree]
    gcols = [bundle.oriented[idx[g]] for g in gens]

    def dot(a: dict[int, int], b: dict[int, int]) -> int:
        if len(a) > len(b):
            a, b = b, a
        return sum(v * b[i] for i, v in a.items() if i in b)

    normal = RationalMatrix.from_rows([[dot(a, b) for b in tcols] for a in tcols])
    rhs = RationalMatrix.from_rows([[dot(a, c) for c in gcols] for a in tcols])
    X = rational_solve(normal, rhs)
    out = []
    for col, c in enumerate(gcols):
        coeffs = {t: X[i, col] for i, t in enumerate(tree) if X[i, col]}
        # the normal equations give a least-squares answer; it must solve T x = c exactly
        lhs: dict[int, Fraction] = {}
        for t, x in coeffs.items():
            for row, sgn in bundle.oriented[idx[t]].items():
                lhs[row] = lhs.get(row, Fraction(0)) + sgn * x
        target = {row: Fraction(v) for row, v in c.items()}
        if {r: v for r, v in lhs.items() if v} != target:
            raise OrientedReductionUndefined(
                f"generator {gens[col]}: oriented column is not in the rational span of the tree"
            )
        out.append(coeffs)
    return out


def solve_cavities_oriented(
    K: SimplicialNetwork, decomp: TreeDecomposition, k: int
) -> list[RepresentativeCycle]:
    gens = decomp.generators.get(k, [])
    out = []
    for g, coeffs in zip(gens, oriented_coefficients(K, decomp, k)):
        members = {g}
        for t, x in coeffs.items():
            if x.denominator % 2 == 0:
                raise OrientedReductionUndefined(f"coefficient {x} of {t} has an even denominator")
            if x.numerator % 2:
                members.add(t)
        chain = frozenset(members)
        if apply_boundary(K, chain):
            raise OrientedReductionUndefined(f"generator {g}: mod-2 image is not a cycle")
        out.append(RepresentativeCycle(k, g, chain))
    return out


@dataclass
class BasisReport:
    valid: bool
    failures: list[str]
    counts: dict[int, int]


def boundary_span(K: SimplicialNetwork, k: int) -> IncrementalSpan:
    """GF(2) span of the columns of B_{k+1} (the k-boundaries)."""
    key = ("boundary_span", k)
    span = K._cache.get(key)
    if span is None:
        if k + 1 <= K.top_dim:
            red = tree_reduction(K, k + 1)
            span = IncrementalSpan(red.reduced.values())
        else:
            span = IncrementalSpan()
        K._cache[key] = span
    return span


def validate_basis(
    K: SimplicialNetwork,
    basis: CavityBasis,
    betti: Optional[tuple[int, ...]] = None,
    dims: Optional[Iterable[int]] = None,
) -> BasisReport:
    """Cycles have zero boundary, are independent modulo boundaries, and
    there are beta_k of them in each dimension (all of 1..l unless ``dims``)."""
    if betti is None:
        betti = betti_numbers(K).betti
    failures: list[str] = []
    counts = {}
    for k in range(1, K.top_dim + 1) if dims is None else dims:
        cycles = basis[k]
        counts[k] = len(cycles)
        beta = betti[k] if 0 <= k < len(betti) else 0
        if len(cycles) != beta:
            failures.append(f"dimension {k}: {len(cycles)} cycles, beta_{k} = {beta}")
        span = boundary_span(K, k).copy()
        for i, c in enumerate(cycles):
            if any(len(s) != k + 1 for s in c.members):
                failures.append(f"dimension {k} cycle {i}: wrong simplex dimension")
                continue
            if any(s not in K for s in c.members):
                failures.append(f"dimension {k} cycle {i}: simplex not in the network")
                continue
            if apply_boundary(K, c.members):
                failures.append(f"dimension {k} cycle {i}: boundary is not zero")
                continue
            if not span.add(chain_to_bits(K, c.members)):
                failures.append(f"dimension {k} cycle {i}: dependent on boundaries and earlier cycles")
    extra = [k for k in basis.cycles if not 1 <= k <= K.top_dim and basis.cycles[k]]
    for k in extra:
        failures.append(f"dimension {k} is outside the network")
    return BasisReport(not failures, failures, counts)
