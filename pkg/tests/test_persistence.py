import json
import math

import pytest
from hypothesis import given

from morsehom.complex import clique_complex, explicit_complex
from morsehom.errors import FormatError, InvalidFiltration
from morsehom.ingest import PointCloud, load_sample, vr_complex
from morsehom.morse import assign_morse, betti_numbers, parse_morse_text
from morsehom.persistence import (
    FiltrationOrder,
    barcode_to_structured,
    barcode_to_svg,
    barcode_to_text,
    export_barcode,
    order_from_morse,
    persistence_pairs,
)

from strategies import adjacency, graphs

INF = math.inf


def test_fig3_first_assignment_bars(fig3):
    f = parse_morse_text(load_sample("fig3_first.morse"))
    b = persistence_pairs(fig3, order_from_morse(f))
    assert b.triples() == [(0, 0, INF), (0, 2, 6), (1, 9, 12), (1, 10, INF)]
    assert barcode_to_text(b) == "0 0 inf\n0 2 6\n1 9 12\n1 10 inf\n"


def test_fig3_second_assignment_bars(fig3):
    f = parse_morse_text(load_sample("fig3_second.morse"))
    b = persistence_pairs(fig3, order_from_morse(f))
    assert b.triples() == [(0, 0, INF), (1, 7, INF)]


def test_torus_barcode(torus):
    b = persistence_pairs(torus, order_from_morse(assign_morse(torus)))
    assert b.triples() == [(0, 0, INF), (1, 9, INF), (1, 10, INF), (2, 28, INF)]
    assert b.infinite_counts(2) == (1, 2, 1)
    assert len(b.instant) == 25


def test_empty_network():
    b = persistence_pairs(explicit_complex([]), FiltrationOrder(()))
    assert b.bars == [] and barcode_to_text(b) == ""


def test_bar_simplices():
    K = explicit_complex([[1, 2]])
    b = persistence_pairs(K, FiltrationOrder((((1,), 0), ((2,), 1), ((1, 2), 2))))
    finite = [bar for bar in b.bars if not bar.infinite][0]
    assert (finite.birth_simplex, finite.death_simplex) == ((2,), (1, 2))


@pytest.mark.parametrize(
    "entries, msg",
    [
        ((((1, 2), 0), ((1,), 0), ((2,), 0)), "comes later"),
        ((((1,), 0), ((2,), 0)), "covers"),
        ((((1,), 0), ((1,), 0), ((2,), 0), ((1, 2), 1)), "twice"),
        ((((1,), 1), ((2,), 0), ((1, 2), 1)), "decreases"),
        ((((1,), 0), ((2,), 0), ((1, 2), 1), ((3,), 2)), "not a simplex"),
    ],
)
def test_invalid_orders(entries, msg):
    K = explicit_complex([[1, 2]])
    with pytest.raises(InvalidFiltration, match=msg):
        persistence_pairs(K, FiltrationOrder(entries))


def test_exports(fig3):
    b = persistence_pairs(fig3, order_from_morse(parse_morse_text(load_sample("fig3_first.morse"))))
    doc = json.loads(export_barcode(b, "structured"))
    assert doc["format"] == "barcode" and doc["version"] == 1
    assert [(r["dim"], r["birth"], r["death"]) for r in doc["bars"]] == [(0, 0, None), (0, 2, 6), (1, 9, 12), (1, 10, None)]
    svg = export_barcode(b, "svg").decode()
    assert svg.startswith("<svg") and svg.count("<line") == 4 and svg.count('marker-end="url(#arrow)"') == 2
    assert barcode_to_structured(b) == doc
    assert barcode_to_svg(b) == svg
    with pytest.raises(FormatError):
        export_barcode(b, "png")


def test_distance_filtration_square():
    cloud = PointCloud.from_rows([[0, 0], [1, 0], [1, 1], [0, 1]])
    K, vals = vr_complex(cloud, 2.0)
    b = persistence_pairs(K, FiltrationOrder.from_values(vals))
    # the square loop lives from side length 1 until the diagonals enter
    assert (1, 1.0, math.sqrt(2)) in b.triples()
    assert b.infinite_counts(K.top_dim)[0] == 1


@given(graphs())
def test_infinite_bars_equal_betti(g):
    n, edges = g
    K = clique_complex(adjacency(n, edges))
    b = persistence_pairs(K, order_from_morse(assign_morse(K)))
    assert b.infinite_counts(K.top_dim) == betti_numbers(K).betti
    # every simplex is either a birth or a death exactly once
    pairs = 2 * (len(b.bars) + len(b.instant)) - sum(bar.infinite for bar in b.bars)
    assert pairs == len(K)


@given(graphs())
def test_lexicographic_filtration_infinite_bars(g):
    n, edges = g
    K = clique_complex(adjacency(n, edges))
    b = persistence_pairs(K, FiltrationOrder.from_values({s: len(s) for s in K}))
    assert b.infinite_counts(K.top_dim) == betti_numbers(K).betti
