import json
from importlib import resources

import pytest

from morsehom import cli

SAMPLES = resources.files("morsehom").joinpath("samples")
TORUS = str(SAMPLES / "torus.txt")
FIG3 = str(SAMPLES / "fig3.txt")


def run(capsys, *args):
    code = cli.main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_betti_torus(capsys):
    code, out, _ = run(capsys, "betti", "--input", TORUS, "--kind", "simplex-list", "--hodge-check")
    assert code == 0
    rows = [line.split() for line in out.splitlines()]
    assert ["0", "9", "0", "1", "1"] in rows
    assert ["1", "27", "8", "2", "2"] in rows
    assert ["2", "18", "17", "1", "1"] in rows
    assert ["0", "0", "0", "ok"] in rows


def test_betti_empty(capsys, tmp_path):
    empty = tmp_path / "e.txt"
    empty.write_text("")
    code, out, _ = run(capsys, "betti", "--input", str(empty), "--kind", "simplex-list")
    assert code == 0 and "k  m_k" in out


def test_morse_torus_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "morse", "--input", TORUS, "--kind", "simplex-list",
                       "--out", str(tmp_path), "--format", "text,csv,structured,svg")
    assert code == 0 and "n = 28" in out
    d = tmp_path / "morse"
    crit = (d / "critical.csv").read_text().splitlines()
    assert crit == ["step,dim,simplex", '0,0,(1)', '9,1,"(2,3)"', '10,1,"(4,7)"', '28,2,"(6,7,9)"']
    assert (d / "barcode.svg").read_text().startswith("<svg")
    manifest = json.loads((d / "manifest.json").read_text())
    assert manifest["command"] == "morse" and "sha256" in manifest["inputs"]["input"]
    assert set(manifest["outputs"]) == {p.name for p in d.iterdir()} - {"manifest.json"}


def test_outputs_are_byte_identical(capsys, tmp_path):
    args = ["cavities", "--input", TORUS, "--kind", "simplex-list", "--shorten", "3", "--exhaustive-1", "--oriented-check"]
    assert run(capsys, *args, "--out", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *args, "--out", str(tmp_path / "b"))[0] == 0
    for f in (tmp_path / "a" / "cavities").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / "cavities" / f.name).read_bytes()


def test_cavities_torus(capsys, tmp_path):
    code, out, _ = run(capsys, "cavities", "--input", TORUS, "--kind", "simplex-list", "--out", str(tmp_path))
    assert code == 0
    doc = json.loads((tmp_path / "cavities" / "cavities.json").read_text())
    assert [c["length"] for c in doc["dimensions"]["1"]] == [3, 3]
    assert [c["length"] for c in doc["dimensions"]["2"]] == [18]


def test_cavities_hollow_triangle(capsys, tmp_path):
    f = tmp_path / "tri.txt"
    f.write_text("0 1\n1 2\n0 2\n")
    code, out, _ = run(capsys, "cavities", "--input", str(f), "--kind", "edge-list")
    # the clique complex fills the triangle
    assert code == 0 and "1       3" not in out
    f.write_text("0,1\n1,2\n0,2\n")
    code, out, _ = run(capsys, "cavities", "--input", str(f), "--kind", "simplex-list")
    assert code == 0 and ["1", "3", "1", "1"] in [line.split() for line in out.splitlines()]


def test_barcodes_fig3_file(capsys):
    code, out, _ = run(capsys, "barcodes", "--input", FIG3, "--kind", "simplex-list",
                       "--filtration", str(SAMPLES / "fig3_first.morse"))
    assert code == 0
    assert out.endswith("0 0 inf\n0 2 6\n1 9 12\n1 10 inf\n")


def test_barcodes_point_cloud(capsys, tmp_path):
    f = tmp_path / "sq.txt"
    f.write_text("0 0\n1 0\n1 1\n0 1\n")
    code, out, _ = run(capsys, "barcodes", "--input", str(f), "--kind", "point-cloud",
                       "--epsilon", "2", "--distance-filtration")
    assert code == 0 and "1 1 1.4142135623730951" in out


def test_ba_run(capsys):
    code, out, _ = run(capsys, "morse", "--ba", "n=120", "m=2", "seed=3", "--max-dim", "2")
    assert code == 0
    assert "c_k" in out


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\nx\n")
    assert run(capsys, "betti", "--input", str(bad), "--kind", "edge-list")[0] == cli.EXIT_PARSE
    assert run(capsys, "betti", "--input", str(tmp_path / "missing"), "--kind", "edge-list")[0] == cli.EXIT_PARSE
    morse = tmp_path / "f.morse"
    morse.write_text("0 C (1)\n5 C (2)\n")
    code, _, err = run(capsys, "barcodes", "--input", FIG3, "--kind", "simplex-list", "--filtration", str(morse))
    assert code == cli.EXIT_FILTRATION and "line 2" in err
    morse.write_text("0 C (1)\n")
    assert run(capsys, "barcodes", "--input", FIG3, "--kind", "simplex-list",
               "--filtration", str(morse))[0] == cli.EXIT_FILTRATION
    assert run(capsys, "barcodes", "--input", FIG3, "--kind", "simplex-list",
               "--distance-filtration")[0] == cli.EXIT_FILTRATION


def test_dimension_error_exit(capsys, monkeypatch):
    from morsehom.errors import DimensionError

    def boom(cfg, out):
        raise DimensionError("k=9 outside 1..2")

    monkeypatch.setitem(cli.COMMANDS, "betti", boom)
    assert run(capsys, "betti", "--input", TORUS, "--kind", "simplex-list")[0] == cli.EXIT_DIMENSION


def test_consistency_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "hodge_betti", lambda K, k: 99)
    code, _, err = run(capsys, "betti", "--input", TORUS, "--kind", "simplex-list", "--hodge-check")
    assert code == cli.EXIT_CONSISTENCY and "Hodge" in err


@pytest.mark.parametrize(
    "args",
    [
        ["betti"],
        ["betti", "--input", TORUS],
        ["betti", "--input", TORUS, "--kind", "simplex-list", "--ba", "n=5"],
        ["betti", "--ba", "k=5"],
        ["betti", "--ba", "n=1"],
        ["betti", "--input", TORUS, "--kind", "point-cloud"],
        ["betti", "--input", TORUS, "--kind", "simplex-list", "--format", "pdf"],
        ["cavities", "--input", TORUS, "--kind", "simplex-list", "--shorten", "-1"],
    ],
)
def test_usage_errors(args, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(args)
    assert exc.value.code == cli.EXIT_USAGE


def test_table_helpers():
    assert cli.format_table(["a", "bb"], [[1, 2]]) == "a  bb\n-  --\n1   2\n"
    assert cli.table_csv(["a"], [["x,y"]]) == 'a\n"x,y"\n'
