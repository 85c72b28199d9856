from __future__ import annotations

import csv
import io

import pytest

from designcoded.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fano_dir(tmp_path, capsys):
    d = tmp_path / "fano"
    code, out, _ = _run(capsys, "construct", "--family", "bibd-pg", "--n", "2", "--out", str(d))
    assert code == 0 and "K=7 F=7 S=7 g=3 Z=3 r=4" in out
    return d


def test_construct_writes_files(fano_dir):
    assert {p.name for p in fano_dir.iterdir()} == {"design.txt", "matrix.txt", "cover.txt"}
    assert (fano_dir / "matrix.txt").read_text().startswith("MATRIX 7 7\n")


def test_verify_ok_and_tamper(fano_dir, capsys):
    code, out, _ = _run(capsys, "verify", "--scheme", str(fano_dir))
    assert code == 0 and out.strip().endswith("ok")
    cover = fano_dir / "cover.txt"
    lines = cover.read_text().splitlines()
    cover.write_text("\n".join([lines[0].replace("7", "6", 1)] + lines[2:]) + "\n")
    code, _, err = _run(capsys, "verify", "--scheme", str(fano_dir))
    assert code == 1 and err.startswith("ERROR ")


def test_simulate_caching(fano_dir, capsys):
    code, out, _ = _run(capsys, "simulate", "--scheme", str(fano_dir), "--trials", "20")
    assert code == 0 and "R=1 decode=ok" in out
    rows = list(csv.DictReader(io.StringIO((fano_dir / "report.csv").read_text())))
    assert rows == [dict(K="7", F="7", Z="3", S="7", R="1", uncached="3/7")]
    assert len((fano_dir / "tx.log").read_text().splitlines()) == 7


def test_simulate_caching_with_input(fano_dir, tmp_path, capsys):
    a, b = tmp_path / "a.bin", tmp_path / "b.bin"
    a.write_bytes(b"hello world")
    b.write_bytes(b"x" * 20)
    out_dir = tmp_path / "run"
    code, out, _ = _run(capsys, "simulate", "--scheme", str(fano_dir), "--input", str(a), str(b),
                        "--out", str(out_dir))
    assert code == 0 and "decode=ok" in out
    assert "PAD" in (out_dir / "padding.txt").read_text()


def test_simulate_mapreduce_variants(tmp_path, capsys):
    d = tmp_path / "comp"
    code, _, _ = _run(capsys, "construct", "--family", "bibd-pg", "--n", "2", "--mode",
                      "computing", "--out", str(d))
    assert code == 0
    code, out, _ = _run(capsys, "simulate", "--scheme", str(d), "--mode", "mapreduce",
                        "--beta", "2")
    assert code == 0 and "L=2/7 reduce=ok" in out
    assert (d / "shuffle.log").read_text().startswith("ROUND 0 ")
    code, out, _ = _run(capsys, "simulate", "--scheme", str(d), "--mode", "mapreduce",
                        "--beta", "2", "--balance")
    assert code == 0 and "per_node_bits=256" in out
    code, out, _ = _run(capsys, "simulate", "--scheme", str(d), "--mode", "mapreduce",
                        "--beta", "2", "--stragglers", "partial:1")
    assert code == 0 and "L=2/7 reduce=ok" in out and "straggler_maps=20/56" in out
    code, out, _ = _run(capsys, "simulate", "--scheme", str(d), "--mode", "mapreduce",
                        "--stragglers", "full:1", "--worst-case")
    assert code == 0 and "search=exhaustive" in out and "max_load=1/3" in out


def test_man_scheme(tmp_path, capsys):
    d = tmp_path / "man"
    code, out, _ = _run(capsys, "construct", "--family", "man", "--K", "5", "--r", "2",
                        "--mode", "computing", "--out", str(d))
    assert code == 0 and "K=5 F=10 S=10 g=3" in out
    code, out, _ = _run(capsys, "simulate", "--scheme", str(d), "--mode", "mapreduce")
    assert code == 0 and "L=2/5" in out


def test_design_file_round_trip(fano_dir, tmp_path, capsys):
    d = tmp_path / "again"
    code, _, _ = _run(capsys, "construct", "--design", str(fano_dir / "design.txt"),
                      "--out", str(d))
    assert code == 0
    for name in ("design.txt", "matrix.txt", "cover.txt"):
        assert (d / name).read_text() == (fano_dir / name).read_text()


@pytest.mark.parametrize("argv", [
    ["construct", "--family", "bibd-pg", "--n", "6", "--out", "x"],
    ["construct", "--family", "man", "--K", "5", "--out", "x"],
    ["construct", "--family", "steiner3", "--q", "9", "--out", "x"],
])
def test_bad_parameters_exit_2(argv, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = _run(capsys, *argv)
    assert code == 2 and err.startswith("ERROR ")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--family", "nope", "--out", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--scheme", "x", "--stragglers", "some"])
    assert exc.value.code == 2


def test_too_many_stragglers(fano_dir, capsys):
    code, _, err = _run(capsys, "simulate", "--scheme", str(fano_dir), "--mode", "mapreduce",
                        "--stragglers", "full:2")
    assert code == 2 and "ERROR" in err


def test_table_command(tmp_path, capsys):
    code, out, _ = _run(capsys, "table", "straggler-man", "--no-sim")
    assert code == 0 and out.startswith("K,r,F,g,kappa,")
    code, _, _ = _run(capsys, "table", "all", "--no-sim", "--out", str(tmp_path / "t"))
    assert code == 0 and len(list((tmp_path / "t").glob("*.csv"))) == 7
