import random

import pytest
from hypothesis import given, strategies as st

from morsehom.errors import NotFullRank, NotInSpan
from morsehom.gf2 import Gf2Matrix, IncrementalSpan, bits, from_indices, gf2_rank, gf2_reduce, gf2_solve

from oracles import dense_rank_mod2
from strategies import gf2_matrices


def dense(rows, c):
    return Gf2Matrix.from_dense(rows) if rows else Gf2Matrix(0, c, (0,) * c)


def test_bits_roundtrip():
    assert bits(0b10110) == [1, 2, 4]
    assert from_indices([4, 1, 2]) == 0b10110


def test_dense_roundtrip():
    rows = [[1, 0, 1], [0, 1, 1]]
    M = Gf2Matrix.from_dense(rows)
    assert M.to_dense() == rows
    assert M.column_set(2) == [0, 1]


def test_known_rank():
    # columns e0+e1, e1+e2, e0+e2 are dependent; e3 independent
    M = Gf2Matrix.from_column_sets(4, [[0, 1], [1, 2], [0, 2], [3]])
    red = gf2_reduce(M)
    assert red.rank == 3
    assert red.pivot_cols == [0, 1, 3]
    assert red.zero_cols == [2]
    # the dependency records which original columns cancel
    assert bits(red.zero_combo[2]) == [0, 1, 2]


def test_matmul_identity():
    M = Gf2Matrix.from_dense([[1, 1], [0, 1], [1, 0]])
    assert (M @ Gf2Matrix.identity(2)) == M


def test_solve_and_errors():
    A = Gf2Matrix.from_column_sets(3, [[0, 1], [1, 2]])
    B = Gf2Matrix.from_column_sets(3, [[0, 2]])
    X = gf2_solve(A, B)
    assert X.column_set(0) == [0, 1]
    with pytest.raises(NotInSpan):
        gf2_solve(A, Gf2Matrix.from_column_sets(3, [[0]]))
    with pytest.raises(NotFullRank):
        gf2_solve(Gf2Matrix.from_column_sets(3, [[0], [0]]), B)


def test_bad_column_order():
    M = Gf2Matrix.from_column_sets(2, [[0], [1]])
    with pytest.raises(ValueError):
        gf2_reduce(M, [0, 0])


def test_out_of_range_bits_rejected():
    with pytest.raises(ValueError):
        Gf2Matrix(2, 1, (0b100,))


@given(gf2_matrices())
def test_rank_matches_dense_oracle(mc):
    rows, c = mc
    assert gf2_rank(dense(rows, c)) == dense_rank_mod2(rows)


@given(gf2_matrices(), st.randoms(use_true_random=False))
def test_rank_invariant_under_column_permutations(mc, rnd):
    rows, c = mc
    M = dense(rows, c)
    r = gf2_rank(M)
    for _ in range(20):
        order = list(range(c))
        rnd.shuffle(order)
        assert gf2_reduce(M, order).rank == r


@given(gf2_matrices())
def test_combos_reproduce_reduced_columns(mc):
    rows, c = mc
    M = dense(rows, c)
    red = gf2_reduce(M)
    for low, col in red.reduced.items():
        acc = 0
        for j in bits(red.combo[low]):
            acc ^= M.columns[j]
        assert acc == col and col.bit_length() - 1 == low
    for j in red.zero_cols:
        acc = 0
        for i in bits(red.zero_combo[j]):
            acc ^= M.columns[i]
        assert acc == 0


@given(gf2_matrices(max_cols=8))
def test_solve_recovers_random_combination(mc):
    rows, c = mc
    M = dense(rows, c)
    red = gf2_reduce(M)
    A = M.select(red.pivot_cols)
    x = random.Random(c).getrandbits(max(A.n_cols, 1)) & ((1 << A.n_cols) - 1)
    b = 0
    for j in bits(x):
        b ^= A.columns[j]
    X = gf2_solve(A, Gf2Matrix(A.n_rows, 1, (b,)))
    assert X.columns[0] == x


@given(st.lists(st.integers(0, 255), max_size=12))
def test_incremental_span_counts_rank(vectors):
    span = IncrementalSpan()
    added = sum(span.add(v) for v in vectors)
    M = Gf2Matrix(8, len(vectors), tuple(vectors))
    assert added == len(span) == gf2_rank(M)
    for v in vectors:
        assert span.contains(v)
