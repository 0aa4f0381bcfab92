"""Hypothesis strategies for small graphs and clique complexes."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 12):
    """(n, edges) with vertices 0..n-1; edge density is drawn per example."""
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    p = draw(st.sampled_from([0.2, 0.35, 0.5, 0.65, 0.8]))
    mask = draw(st.lists(st.floats(0, 1, exclude_max=True), min_size=len(pairs), max_size=len(pairs)))
    return n, [e for e, x in zip(pairs, mask) if x < p]


def adjacency(n: int, edges) -> dict[int, set[int]]:
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


@st.composite
def gf2_matrices(draw, max_rows: int = 10, max_cols: int = 10):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return [draw(st.lists(st.integers(0, 1), min_size=c, max_size=c)) for _ in range(r)], c
