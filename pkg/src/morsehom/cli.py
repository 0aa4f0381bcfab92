"""Command-line front end.

    morsehom betti    --input torus.txt --kind simplex-list
    morsehom morse    --input graph.txt --kind edge-list --out runs
    morsehom cavities --ba n=1000 m=2 seed=7 --shorten 10 --exhaustive-1
    morsehom barcodes --input fig3.txt --kind simplex-list --filtration first.morse

With ``--out DIR`` each command writes its files to ``DIR/<command>/``
together with ``manifest.json`` (config, input digests, tool version).
Reruns with the same inputs produce byte-identical files.

Exit status: 0 success, 2 usage error, 3 unreadable or malformed input,
4 dimension error, 5 internal consistency failure, 6 invalid filtration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Optional

from . import ingest
from .boundary import hodge_betti
from .cavities import CavityBasis, solve_all, solve_cavities_oriented, validate_basis
from .complex import SimplicialNetwork, clique_complex, euler_characteristic
from .errors import (
    ClassificationError,
    DimensionError,
    FormatError,
    InvalidDecomposition,
    InvalidFiltration,
    MorseHomError,
    NotInSpan,
    OrientedReductionUndefined,
    ParseError,
)
from .morse import assign_morse, betti_numbers, classify, format_simplex, parse_morse_text, validate_morse
from .persistence import FiltrationOrder, barcode_to_structured, barcode_to_svg, barcode_to_text, order_from_morse, persistence_pairs
from .shortening import ShorteningError, minimal_one_cavities, shorten_basis

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DIMENSION = 4
EXIT_CONSISTENCY = 5
EXIT_FILTRATION = 6

KINDS = ("edge-list", "simplex-list", "point-cloud", "network")
FORMATS = ("text", "csv", "structured", "svg")


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0+unknown"


class ConsistencyFailure(MorseHomError):
    """A computed object failed its own validation."""


@dataclass
class RunConfig:
    command: str
    kind: Optional[str] = None
    input: Optional[str] = None
    ba: Optional[dict[str, int]] = None
    epsilon: Optional[float] = None
    max_dim: Optional[int] = None
    index_base: int = 0
    out: Optional[str] = None
    formats: list[str] = field(default_factory=lambda: ["text", "csv", "structured"])
    shorten: int = 0
    exhaustive_1: bool = False
    oriented_check: bool = False
    hodge_check: bool = False
    filtration: Optional[str] = None
    distance_filtration: bool = False

    def manifest_config(self) -> dict:
        cfg = asdict(self)
        cfg.pop("out")
        return cfg


# ----------------------------------------------------------------- helpers


def format_table(header: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def table_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class Output:
    """Collects stdout text and output files; files are written on ``flush``."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.files: dict[str, bytes] = {}
        self.inputs: dict[str, dict] = {}

    def want(self, fmt: str) -> bool:
        return fmt in self.cfg.formats

    def add(self, name: str, data) -> None:
        self.files[name] = data.encode() if isinstance(data, str) else data

    def table(self, stem: str, header: list[str], rows: list[list], echo: bool = True) -> str:
        text = format_table(header, rows)
        if echo:
            sys.stdout.write(text)
        if self.want("text"):
            self.add(f"{stem}.txt", text)
        if self.want("csv"):
            self.add(f"{stem}.csv", table_csv(header, rows))
        return text

    def record_input(self, role: str, path: str, data: bytes) -> None:
        self.inputs[role] = {"path": path, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}

    def flush(self) -> None:
        if not self.cfg.out:
            return
        target = Path(self.cfg.out) / self.cfg.command
        target.mkdir(parents=True, exist_ok=True)
        for name in sorted(self.files):
            (target / name).write_bytes(self.files[name])
        manifest = {
            "tool": "morsehom",
            "version": tool_version(),
            "command": self.cfg.command,
            "config": self.cfg.manifest_config(),
            "inputs": self.inputs,
            "outputs": {n: hashlib.sha256(d).hexdigest() for n, d in sorted(self.files.items())},
        }
        (target / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_input(cfg: RunConfig, out: Output):
    """The network to analyse and, for point clouds, its distance values."""
    if cfg.ba is not None:
        adj = ingest.ba_generate(ingest.BAConfig(cfg.ba["n"], cfg.ba.get("m", 2), cfg.ba.get("seed", 0)))
        return clique_complex(adj, cfg.max_dim), None
    data = _read(cfg.input)
    out.record_input("input", cfg.input, data)
    if cfg.kind == "edge-list":
        parsed = ingest.parse_edge_list(data, index_base=cfg.index_base)
        if parsed.duplicates or parsed.self_loops:
            print(f"dropped {parsed.duplicates} duplicate edges and {parsed.self_loops} self-loops", file=sys.stderr)
        return clique_complex(parsed.adjacency, cfg.max_dim), None
    if cfg.kind == "simplex-list":
        K = ingest.parse_simplex_list(data)
        if cfg.max_dim is not None and K.top_dim > cfg.max_dim:
            K = SimplicialNetwork([K.simplices(k) for k in range(cfg.max_dim + 1)])
        return K, None
    if cfg.kind == "point-cloud":
        cloud = ingest.parse_point_cloud(data)
        return ingest.vr_complex(cloud, cfg.epsilon, cfg.max_dim)
    try:
        K, values = ingest.load_network(data)
    except FormatError as exc:
        raise ParseError(str(exc)) from None
    return K, values


def _alt(xs) -> int:
    return sum((-1) ** k * x for k, x in enumerate(xs))


def _check_hodge(K: SimplicialNetwork, betti: tuple[int, ...], out: Output) -> None:
    rows = []
    bad = []
    for k in range(K.top_dim + 1):
        h = hodge_betti(K, k)
        rows.append([k, betti[k], h, "ok" if h == betti[k] else "MISMATCH"])
        if h != betti[k]:
            bad.append(k)
    out.table("hodge", ["k", "beta_k", "hodge_k", "status"], rows)
    if bad:
        raise ConsistencyFailure(f"Hodge kernel dimension differs from beta_k in dimensions {bad}")


# ----------------------------------------------------------------- commands


def cmd_betti(cfg: RunConfig, out: Output) -> None:
    K, _ = load_input(cfg, out)
    bv = betti_numbers(K)
    f = assign_morse(K)
    c = f.critical_counts(K.top_dim)
    r = (0,) + tuple(bv.r)  # rank of B_0 is zero
    rows = [[k, bv.m[k], r[k], bv.betti[k], c[k]] for k in range(len(bv.m))]
    out.table("betti", ["k", "m_k", "r_k", "beta_k", "c_k"], rows)
    chi = euler_characteristic(K)
    ok = chi == _alt(c) == _alt(bv.betti)
    ident = [[chi, _alt(c), _alt(bv.betti), "ok" if ok else "MISMATCH"]]
    out.table("euler", ["chi_m", "chi_c", "chi_beta", "status"], ident)
    if out.want("structured"):
        out.add(
            "betti.json",
            json.dumps(
                {"format": "betti", "version": 1, "m": list(bv.m), "r": list(bv.r),
                 "betti": list(bv.betti), "critical": list(c), "chi": chi},
                indent=2,
            ) + "\n",
        )
    if cfg.hodge_check:
        _check_hodge(K, bv.betti, out)
    if not ok:
        raise ConsistencyFailure("alternating sums of m, c and beta disagree")


def _emit_barcode(barcode, out: Output, top_dim: int) -> None:
    rows = [[b.dim, b.birth, "inf" if b.infinite else b.death] for b in sorted(barcode.bars, key=lambda b: (b.dim, b.birth, b.death))]
    out.table("barcode", ["dim", "birth", "death"], rows, echo=False)
    if out.want("text"):
        out.add("barcode.bars", barcode_to_text(barcode))
    if out.want("structured"):
        out.add("barcode.json", json.dumps(barcode_to_structured(barcode), indent=2) + "\n")
    if out.want("svg"):
        out.add("barcode.svg", barcode_to_svg(barcode))
    counts = barcode.infinite_counts(top_dim)
    print(f"bars: {len(barcode.bars)} finite or infinite, {len(barcode.instant)} zero-length; infinite per dimension {counts}")


def cmd_morse(cfg: RunConfig, out: Output) -> None:
    K, _ = load_input(cfg, out)
    f = assign_morse(K)
    report = validate_morse(K, f)
    l = K.top_dim
    bv = betti_numbers(K)
    print(f"n = {f.n}, promotions = {len(f.promotions)}")
    rows = [[k, report.c[k] if k < len(report.c) else 0, bv.betti[k]] for k in range(l + 1)]
    out.table("critical_counts", ["k", "c_k", "beta_k"], rows)
    out.add("filtration.morse", f.to_text())
    crit_rows = [[i, len(s) - 1, format_simplex(s)] for i, s in f.critical()]
    out.table("critical", ["step", "dim", "simplex"], crit_rows, echo=False)
    lines = [f"valid: {report.valid}", f"c: {list(report.c)}", f"promotions: {len(f.promotions)}"]
    lines += [f"promoted: {format_simplex(s)}" for s in f.promotions]
    lines += [f"violation: {v}" for v in report.violations]
    out.add("validation.txt", "\n".join(lines) + "\n")
    if l >= 0:
        _emit_barcode(persistence_pairs(K, order_from_morse(f)), out, l)
    if not report.valid:
        raise ConsistencyFailure("; ".join(report.violations[:5]))


def cmd_cavities(cfg: RunConfig, out: Output) -> None:
    K, _ = load_input(cfg, out)
    decomp = classify(K)
    basis = solve_all(K, decomp)
    betti = betti_numbers(K).betti
    initial = CavityBasis(dict(basis.cycles))
    if cfg.oriented_check:
        rows = []
        bad = []
        for k in range(1, K.top_dim + 1):
            if not betti[k]:
                continue
            try:
                ori = solve_cavities_oriented(K, decomp, k)
            except OrientedReductionUndefined as exc:
                rows.append([k, "undefined", str(exc)])
                continue
            same = [a.members == b.members for a, b in zip(ori, initial[k])]
            rows.append([k, "agree" if all(same) else "DISAGREE", f"{sum(same)}/{len(same)}"])
            if not all(same):
                bad.append(k)
        out.table("oriented_check", ["k", "status", "detail"], rows)
        if bad:
            raise ConsistencyFailure(f"oriented cycles differ from GF(2) cycles in dimensions {bad}")
    if cfg.hodge_check:
        _check_hodge(K, betti, out)
    if cfg.exhaustive_1 and K.top_dim >= 1:
        basis.cycles[1] = minimal_one_cavities(K, decomp)[1]
    moves = []
    if cfg.shorten:
        for k in range(1, K.top_dim + 1):
            if basis[k]:
                basis, mv = shorten_basis(K, basis, k, max_rounds=cfg.shorten)
                moves.extend(mv)
        out.add("shortening.txt", "".join(m.to_line() + "\n" for m in moves))
    report = validate_basis(K, basis, betti)
    hist_rows = []
    for k in range(1, K.top_dim + 1):
        before = initial.histogram(k)
        after = basis.histogram(k)
        for length in sorted(set(before) | set(after)):
            hist_rows.append([k, length, before.get(length, 0), after.get(length, 0)])
    out.table("lengths", ["k", "length", "count_initial", "count_final"], hist_rows)
    totals = [[k, len(basis[k]), sum(initial.lengths(k)), sum(basis.lengths(k))] for k in range(1, K.top_dim + 1)]
    out.table("totals", ["k", "cavities", "total_len_initial", "total_len_final"], totals)
    if out.want("text"):
        out.add("cavities.cyc", basis.to_text())
    if out.want("structured"):
        out.add("cavities.json", basis.to_json())
    if not report.valid:
        raise ConsistencyFailure("; ".join(report.failures[:5]))


def cmd_barcodes(cfg: RunConfig, out: Output) -> None:
    K, distances = load_input(cfg, out)
    if cfg.filtration:
        data = _read(cfg.filtration)
        out.record_input("filtration", cfg.filtration, data)
        f = parse_morse_text(data.decode("utf-8", errors="replace"))
        report = validate_morse(K, f)
        if not report.valid:
            print("warning: filtration is not a discrete Morse function: " + "; ".join(report.violations[:3]), file=sys.stderr)
        print(f"c = {report.c}")
        order = order_from_morse(f)
    elif cfg.distance_filtration:
        if distances is None:
            raise InvalidFiltration("--distance-filtration needs a point-cloud or network input with values")
        order = FiltrationOrder.from_values(distances)
    else:
        order = order_from_morse(assign_morse(K))
    barcode = persistence_pairs(K, order)
    _emit_barcode(barcode, out, max(K.top_dim, 0))
    sys.stdout.write(barcode_to_text(barcode))


COMMANDS = {"betti": cmd_betti, "morse": cmd_morse, "cavities": cmd_cavities, "barcodes": cmd_barcodes}


# ----------------------------------------------------------------- parsing


def _ba_spec(tokens: list[str]) -> dict[str, int]:
    spec = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("n", "m", "seed"):
            raise argparse.ArgumentTypeError(f"bad --ba token {tok!r}; expected n=, m=, seed=")
        try:
            spec[key] = int(val)
        except ValueError:
            raise argparse.ArgumentTypeError(f"--ba {key} must be an integer") from None
    if "n" not in spec:
        raise argparse.ArgumentTypeError("--ba needs n=<int>")
    if spec["n"] < 2 or spec.get("m", 2) < 1:
        raise argparse.ArgumentTypeError("--ba needs n >= 2 and m >= 1")
    return spec


def _formats(text: str) -> list[str]:
    fmts = [f.strip() for f in text.split(",") if f.strip()]
    unknown = [f for f in fmts if f not in FORMATS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown format(s) {unknown}; choose from {','.join(FORMATS)}")
    return fmts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--input", help="input file")
    src.add_argument("--kind", choices=KINDS, help="format of --input")
    src.add_argument("--ba", nargs="+", metavar="KEY=INT", help="generate a BA graph: n=<int> m=<int> seed=<int>")
    src.add_argument("--epsilon", type=float, help="distance threshold for point clouds")
    src.add_argument("--max-dim", type=int, help="highest simplex dimension to build")
    src.add_argument("--index-base", type=int, default=0, help="subtracted from edge-list ids")
    common.add_argument("--out", help="write files to OUT/<command>/")
    common.add_argument("--format", default="text,csv,structured", type=_formats,
                        help="comma list from text,csv,structured,svg (default text,csv,structured)")

    p = argparse.ArgumentParser(prog="morsehom", description="Homology of simplicial networks from spanning trees.")
    p.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("betti", parents=[common], help="m_k, r_k, beta_k and Euler identities").add_argument(
        "--hodge-check", action="store_true", help="cross-check beta_k against Hodge Laplacian kernels")
    sub.add_parser("morse", parents=[common], help="optimal Morse filtration, critical simplices, barcode")
    cav = sub.add_parser("cavities", parents=[common], help="representative cycles of all cavities")
    cav.add_argument("--shorten", type=int, default=0, metavar="ROUNDS", help="rounds of local shortening")
    cav.add_argument("--exhaustive-1", action="store_true", help="shortest independent 1-cycles")
    cav.add_argument("--oriented-check", action="store_true", help="cross-check with the oriented solve")
    cav.add_argument("--hodge-check", action="store_true", help="cross-check beta_k with Hodge kernels")
    bar = sub.add_parser("barcodes", parents=[common], help="persistence barcode of a filtration")
    bar.add_argument("--filtration", help="step file ('<i> C (s)' / '<i> P (face) (coface)' lines)")
    bar.add_argument("--distance-filtration", action="store_true", help="use point-cloud distance values")
    return p


def parse_config(argv: Optional[list[str]] = None) -> RunConfig:
    p = build_parser()
    ns = p.parse_args(argv)
    if (ns.input is None) == (ns.ba is None):
        p.error("give exactly one of --input or --ba")
    if ns.input is not None and ns.kind is None:
        p.error("--input needs --kind")
    if ns.kind == "point-cloud" and (ns.epsilon is None or ns.epsilon < 0):
        p.error("point clouds need --epsilon >= 0")
    if ns.max_dim is not None and ns.max_dim < 0:
        p.error("--max-dim must be >= 0")
    if getattr(ns, "shorten", 0) < 0:
        p.error("--shorten must be >= 0")
    ba = None
    if ns.ba is not None:
        try:
            ba = _ba_spec(ns.ba)
        except argparse.ArgumentTypeError as exc:
            p.error(str(exc))
    return RunConfig(
        command=ns.command,
        kind=ns.kind if ba is None else "ba-gen",
        input=ns.input,
        ba=ba,
        epsilon=ns.epsilon,
        max_dim=ns.max_dim,
        index_base=ns.index_base,
        out=ns.out,
        formats=ns.format,
        shorten=getattr(ns, "shorten", 0),
        exhaustive_1=getattr(ns, "exhaustive_1", False),
        oriented_check=getattr(ns, "oriented_check", False),
        hodge_check=getattr(ns, "hodge_check", False),
        filtration=getattr(ns, "filtration", None),
        distance_filtration=getattr(ns, "distance_filtration", False),
    )


def main(argv: Optional[list[str]] = None) -> int:
    cfg = parse_config(argv)
    out = Output(cfg)
    try:
        COMMANDS[cfg.command](cfg, out)
        status = EXIT_OK
    except InvalidFiltration as exc:
        print(f"error: invalid filtration: {exc}", file=sys.stderr)
        status = EXIT_FILTRATION
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_PARSE
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = EXIT_DIMENSION
    except (ConsistencyFailure, ClassificationError, InvalidDecomposition, NotInSpan, ShorteningError) as exc:
        print(f"error: consistency check failed: {exc}", file=sys.stderr)
        status = EXIT_CONSISTENCY
    # files are still written on failure so the report can be inspected
    out.flush()
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
