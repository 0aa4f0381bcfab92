"""Persistence pairing, barcodes and their export formats."""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional, Union
from xml.sax.saxutils import escape

from .complex import Simplex, SimplicialNetwork, faces
from .errors import FormatError, InvalidFiltration
from .morse import MorseFiltration, format_simplex

Value = Union[int, float]


@dataclass(frozen=True)
class FiltrationOrder:
    """Total order of simplices with non-decreasing filtration values."""

    entries: tuple[tuple[Simplex, Value], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def values(self) -> list[Value]:
        return [v for _, v in self.entries]

    @classmethod
    def from_values(cls, values: Mapping[Simplex, Value]) -> "FiltrationOrder":
        """Sort by (value, dimension, lexicographic); faces-before-cofaces holds
        whenever ``values`` is monotone."""
        return cls(tuple(sorted(values.items(), key=lambda sv: (sv[1], len(sv[0]), sv[0]))))


def order_from_morse(f: MorseFiltration) -> FiltrationOrder:
    entries = []
    for i, st in enumerate(f.steps):
        for s in st.simplices:  # a pair lists its face first
            entries.append((s, i))
    return FiltrationOrder(tuple(entries))


@dataclass(frozen=True)
class Bar:
    dim: int
    birth: Value
    death: Value  # math.inf for a persistent class
    birth_simplex: Simplex
    death_simplex: Optional[Simplex] = None

    @property
    def infinite(self) -> bool:
        return math.isinf(self.death)


@dataclass
class Barcode:
    bars: list[Bar] = field(default_factory=list)
    instant: list[Bar] = field(default_factory=list)

    def infinite_counts(self, top_dim: Optional[int] = None) -> tuple[int, ...]:
        dims = [b.dim for b in self.bars if b.infinite]
        l = top_dim if top_dim is not None else max(dims, default=-1)
        return tuple(dims.count(k) for k in range(l + 1))

    def triples(self, include_instant: bool = False) -> list[tuple[int, Value, Value]]:
        bars = self.bars + (self.instant if include_instant else [])
        return sorted((b.dim, b.birth, b.death) for b in bars)


def persistence_pairs(K: SimplicialNetwork, order: FiltrationOrder) -> Barcode:
    """Standard column reduction of the filtered boundary matrix.

    Rows and columns are positions in ``order``; a column whose reduced form
    is non-zero kills the class born at its lowest row.
    """
    pos: dict[Simplex, int] = {}
    prev_value = -math.inf
    for p, (s, v) in enumerate(order.entries):
        s = tuple(s)
        if s not in K:
            raise InvalidFiltration(f"{format_simplex(s)} is not a simplex of the network")
        if s in pos:
            raise InvalidFiltration(f"{format_simplex(s)} appears twice")
        if v < prev_value:
            raise InvalidFiltration(f"value of {format_simplex(s)} decreases along the order")
        prev_value = v
        for t in faces(s):
            if t not in pos:
                raise InvalidFiltration(f"face {format_simplex(t)} of {format_simplex(s)} comes later")
        pos[s] = p
    if len(pos) != len(K):
        raise InvalidFiltration(f"order covers {len(pos)} of {len(K)} simplices")

    entries = order.entries
    pivot_at: dict[int, int] = {}  # lowest row -> reduced column
    death_of: dict[int, int] = {}
    for p, (s, _) in enumerate(entries):
        col = 0
        for t in faces(tuple(s)):
            col ^= 1 << pos[t]
        while col:
            low = col.bit_length() - 1
            hit = pivot_at.get(low)
            if hit is None:
                pivot_at[low] = col
                death_of[low] = p
                break
            col ^= hit

    killers = set(death_of.values())
    barcode = Barcode()
    for p, (s, v) in enumerate(entries):
        s = tuple(s)
        if p in death_of:
            d_simplex, d_value = entries[death_of[p]]
            bar = Bar(len(s) - 1, v, d_value, s, tuple(d_simplex))
            (barcode.instant if d_value == v else barcode.bars).append(bar)
        elif p not in killers:
            barcode.bars.append(Bar(len(s) - 1, v, math.inf, s))
    return barcode


def _fmt(x: Value) -> str:
    if math.isinf(x):
        return "inf"
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _json_value(x: Value):
    if math.isinf(x):
        return None
    return int(x) if float(x).is_integer() else float(x)


def barcode_to_text(b: Barcode) -> str:
    return "".join(f"{bar.dim} {_fmt(bar.birth)} {_fmt(bar.death)}\n" for bar in _display_order(b))


def barcode_to_structured(b: Barcode) -> dict:
    def row(bar: Bar) -> dict:
        return {
            "dim": bar.dim,
            "birth": _json_value(bar.birth),
            "death": _json_value(bar.death),
            "birth_simplex": list(bar.birth_simplex),
            "death_simplex": list(bar.death_simplex) if bar.death_simplex is not None else None,
        }

    return {
        "format": "barcode",
        "version": 1,
        "bars": [row(bar) for bar in _display_order(b)],
        "instant": [row(bar) for bar in sorted(b.instant, key=_bar_key)],
    }


def _bar_key(bar: Bar):
    return (bar.dim, bar.birth, bar.death, bar.birth_simplex)


def _display_order(b: Barcode) -> list[Bar]:
    return sorted(b.bars, key=_bar_key)


def barcode_to_svg(b: Barcode, width: int = 640, row_height: int = 14) -> str:
    """Horizontal bars grouped by dimension; persistent bars end in an arrowhead."""
    bars = _display_order(b)
    finite = [x for bar in bars for x in (bar.birth, bar.death) if not math.isinf(x)]
    hi = max(finite, default=1)
    lo = min(finite, default=0)
    if hi == lo:
        hi = lo + 1
    span = (hi - lo) * 1.15
    left, right = 60, 20
    scale = (width - left - right) / span

    def x(v: Value) -> float:
        return left + ((lo + span if math.isinf(v) else v) - lo) * scale

    lines = []
    y = 20
    for dim in sorted({bar.dim for bar in bars}):
        lines.append(f'<text x="4" y="{y + 10}" font-size="11">H{dim}</text>')
        for bar in (bar for bar in bars if bar.dim == dim):
            y += row_height
            x0, x1 = x(bar.birth), x(bar.death)
            marker = ' marker-end="url(#arrow)"' if bar.infinite else ""
            lines.append(
                f'<line x1="{x0:.2f}" y1="{y}" x2="{x1:.2f}" y2="{y}" stroke="black" '
                f'stroke-width="3"{marker}><title>{escape(format_simplex(bar.birth_simplex))}</title></line>'
            )
        y += row_height
    height = y + 20
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="5" '
        'markerHeight="5" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>\n'
        + "\n".join(lines)
        + ("\n" if lines else "")
        + "</svg>\n"
    )


def export_barcode(b: Barcode, format: str) -> bytes:
    if format == "text":
        return barcode_to_text(b).encode()
    if format == "structured":
        return (json.dumps(barcode_to_structured(b), indent=2) + "\n").encode()
    if format == "svg":
        return barcode_to_svg(b).encode()
    raise FormatError(f"unknown barcode format {format!r}")
