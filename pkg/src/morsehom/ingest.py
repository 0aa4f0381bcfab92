"""Getting networks in: edge lists, simplex lists, point clouds, BA graphs.

Network files are JSON documents::

    {"format": "simplicial-network", "version": 1,
     "simplices": [[[v], ...], [[u, v], ...], ...],
     "filtration": [[0.0, ...], [d_uv, ...], ...] | null}

``simplices[k]`` lists the k-simplices in lexicographic order and
``filtration[k][i]`` is the value of ``simplices[k][i]``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Union

import numpy as np

from .complex import Simplex, SimplicialNetwork, clique_complex, explicit_complex
from .errors import FormatError, InvalidSimplex, ParseError

Source = Union[bytes, str]
NETWORK_FORMAT = "simplicial-network"
NETWORK_VERSION = 1


def _text(data: Source) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    return data


def _content_lines(data: Source):
    """(line number, stripped content) for non-blank, non-comment lines."""
    for no, raw in enumerate(_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line and not line.startswith("%"):
            yield no, line


@dataclass
class EdgeList:
    adjacency: dict[int, set[int]]
    duplicates: int = 0
    self_loops: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.adjacency)

    @property
    def n_edges(self) -> int:
        return sum(len(ws) for ws in self.adjacency.values()) // 2


def parse_edge_list(
    data: Source,
    delimiter: Optional[str] = None,
    index_base: int = 0,
    symmetrize: bool = True,
) -> EdgeList:
    """Undirected simple graph from ``u v [weight]`` lines.

    ``index_base`` is subtracted from every id, so 1-based files can be
    mapped to 0-based ids.  With ``symmetrize`` on, ``v u`` after ``u v``
    is a duplicate; with it off only a repeat of ``u v`` is, and the two
    directions merge silently.  The graph is undirected either way.
    """
    adj: dict[int, set[int]] = {}
    seen: set[tuple[int, int]] = set()
    out = EdgeList(adj)
    for no, line in _content_lines(data):
        tokens = line.split(delimiter) if delimiter else line.split()
        tokens = [t.strip() for t in tokens if t.strip()]
        if len(tokens) not in (2, 3):
            raise ParseError(f"expected 'u v [weight]', got {line!r}", no)
        try:
            u, v = int(tokens[0]) - index_base, int(tokens[1]) - index_base
            if len(tokens) == 3:
                float(tokens[2])
        except ValueError:
            raise ParseError(f"non-numeric token in {line!r}", no) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id after index base {index_base}", no)
        adj.setdefault(u, set())
        adj.setdefault(v, set())
        if u == v:
            out.self_loops += 1
            continue
        key = (min(u, v), max(u, v)) if symmetrize else (u, v)
        if key in seen:
            out.duplicates += 1
            continue
        seen.add(key)
        adj[u].add(v)
        adj[v].add(u)
    return out


_SIMPLEX_LINE = re.compile(r"^\(?\s*([^()]*?)\s*\)?$")


def parse_simplex_list(data: Source) -> SimplicialNetwork:
    """One simplex per line as comma-separated ids, e.g. ``1,2,3`` or
    ``(1,2,3)``; the downward closure is taken."""
    simplices = []
    for no, line in _content_lines(data):
        match = _SIMPLEX_LINE.match(line)
        if not match:
            raise ParseError(f"malformed simplex {line!r}", no)
        try:
            ids = [int(tok) for tok in match.group(1).split(",")]
        except ValueError:
            raise ParseError(f"malformed simplex {line!r}", no) from None
        if len(set(ids)) != len(ids) or min(ids) < 0:
            raise ParseError(f"repeated or negative vertex in {line!r}", no)
        simplices.append(ids)
    try:
        return explicit_complex(simplices)
    except InvalidSimplex as exc:  # pragma: no cover - guarded above
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # shape (n, d), float64

    def __post_init__(self):
        if self.points.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        if self.points.size and not np.isfinite(self.points).all():
            raise ValueError("coordinates must be finite")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @classmethod
    def from_rows(cls, rows) -> "PointCloud":
        arr = np.asarray(rows, dtype=np.float64)
        if arr.size == 0:
            arr = arr.reshape(0, 1)
        return cls(arr)


def parse_point_cloud(data: Source) -> PointCloud:
    rows = []
    d = None
    for no, line in _content_lines(data):
        tokens = line.replace(",", " ").split()
        try:
            row = [float(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {line!r}", no) from None
        if not all(math.isfinite(x) for x in row):
            raise ParseError("coordinates must be finite", no)
        if d is None:
            d = len(row)
        elif len(row) != d:
            raise ParseError(f"point has {len(row)} coordinates, expected {d}", no)
        rows.append(row)
    return PointCloud.from_rows(rows)


def pairwise_distances(cloud: PointCloud) -> np.ndarray:
    pts = cloud.points
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def vr_complex(
    cloud: PointCloud, epsilon: float, max_dim: Optional[int] = None
) -> tuple[SimplicialNetwork, dict[Simplex, float]]:
    """Vietoris-Rips complex at scale ``epsilon`` (pairs at distance exactly
    epsilon are joined).  Vertex ids are the 0-based row numbers.  The
    filtration value of a simplex is its largest pairwise distance."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    D = pairwise_distances(cloud)
    n = cloud.n
    close = D <= epsilon
    np.fill_diagonal(close, False)
    adjacency = {v: set(np.flatnonzero(close[v]).tolist()) for v in range(n)}
    K = clique_complex(adjacency, max_dim)
    values: dict[Simplex, float] = {}
    for k in range(K.top_dim + 1):
        for s in K.simplices(k):
            if k == 0:
                values[s] = 0.0
            elif k == 1:
                values[s] = float(D[s[0], s[1]])
            else:
                # pairs avoiding the first or the last vertex lie in a face
                values[s] = max(values[s[1:]], values[s[:-1]], float(D[s[0], s[-1]]))
    return K, values


@dataclass(frozen=True)
class BAConfig:
    n_final: int
    m_attach: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_final < 2:
            raise ValueError("n_final must be at least 2")
        if self.m_attach < 1:
            raise ValueError("m_attach must be at least 1")


def ba_generate(cfg: BAConfig) -> dict[int, set[int]]:
    """Preferential-attachment graph grown from two unconnected nodes.

    Node t (t = 2, 3, ...) attaches to min(m_attach, t) distinct earlier
    nodes drawn with probability proportional to degree; while every
    degree is zero the draw is uniform.  Randomness comes from numpy's
    PCG64 generator seeded with ``cfg.seed``, so the output depends only
    on the config.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    adj: dict[int, set[int]] = {0: set(), 1: set()}
    ends: list[int] = []  # every edge contributes both endpoints: degree roulette
    for t in range(2, cfg.n_final):
        want = min(cfg.m_attach, t)
        targets: list[int] = []
        while len(targets) < want:
            if ends:
                w = ends[int(rng.integers(len(ends)))]
            else:
                w = int(rng.integers(t))
            if w not in targets:
                targets.append(w)
        adj[t] = set()
        for w in targets:
            adj[t].add(w)
            adj[w].add(t)
            ends.extend((t, w))
    return adj


def network_to_structured(
    K: SimplicialNetwork, filtration: Optional[dict[Simplex, float]] = None
) -> dict:
    doc = {
        "format": NETWORK_FORMAT,
        "version": NETWORK_VERSION,
        "simplices": [[list(s) for s in K.simplices(k)] for k in range(K.top_dim + 1)],
        "filtration": None,
    }
    if filtration is not None:
        doc["filtration"] = [[filtration[s] for s in K.simplices(k)] for k in range(K.top_dim + 1)]
    return doc


def save_network(
    K: SimplicialNetwork, filtration: Optional[dict[Simplex, float]] = None
) -> str:
    return json.dumps(network_to_structured(K, filtration), indent=1) + "\n"


def load_network(data: Source) -> tuple[SimplicialNetwork, Optional[dict[Simplex, float]]]:
    try:
        doc = json.loads(_text(data))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or doc.get("format") != NETWORK_FORMAT:
        raise FormatError("not a simplicial-network document")
    if doc.get("version") != NETWORK_VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}")
    levels = doc.get("simplices") or []
    try:
        registry = [[tuple(int(v) for v in s) for s in level] for level in levels]
    except (TypeError, ValueError):
        raise FormatError("simplices must be lists of integer ids") from None
    K = SimplicialNetwork.from_simplices(s for level in registry for s in level)
    if K.counts != tuple(len(level) for level in registry):
        raise FormatError("simplex arrays are not closed under taking faces")
    filt = None
    if doc.get("filtration") is not None:
        filt = {}
        for level, vals in zip(registry, doc["filtration"]):
            if len(vals) != len(level):
                raise FormatError("filtration arrays do not match simplex arrays")
            filt.update(zip(level, (float(x) for x in vals)))
    return K, filt


def load_sample(name: str) -> str:
    """Text of a bundled sample (``torus.txt``, ``fig3.txt``, ...)."""
    return resources.files("morsehom").joinpath("samples", name).read_text()
