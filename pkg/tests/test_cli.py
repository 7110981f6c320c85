import csv

import pytest

from wilsonindex import cli
from wilsonindex.formats import write_unitary_tuple
from wilsonindex.ktheory import clock_shift


def run(argv):
    try:
        return cli.main(argv)
    except SystemExit as exc:
        return exc.code


def test_index_trivial(capsys):
    assert run(["index", "--d", "2", "--N", "8", "--m", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "I = 0" in out


def test_index_flux_with_csv(tmp_path, capsys):
    path = tmp_path / "row.csv"
    rc = run(["index", "--d", "2", "--N", "8", "--flux", "1,2=1",
              "--m", "1.0", "--csv", str(path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "I = 1" in out and "agrees = true" in out
    lines = path.read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 2


def test_index_singular_exit_code(capsys):
    assert run(["index", "--d", "2", "--N", "8", "--m", "0"]) == 2
    err = capsys.readouterr().err
    assert "decrease a (increase N) or adjust m" in err


def test_usage_errors(capsys):
    assert run(["index", "--bogus"]) == 1
    assert run(["index", "--d", "2", "--N", "8", "--m", "5"]) == 1
    assert run(["index", "--d", "2", "--flux", "1,3=1"]) == 1
    assert run(["sweep", "--sweep", "zzz"]) == 1
    assert run([]) == 1


def test_gap_command(capsys):
    assert run(["gap", "--d", "2", "--m", "1", "--grid", "512"]) == 0
    assert capsys.readouterr().out.strip() == "1.000000"


def test_degree_command(capsys):
    assert run(["degree", "--d", "2", "--m", "1"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_acm_builtin_cross_check(capsys):
    rc = run(["acm", "--builtin", "clock-shift", "--n", "8", "--m", "1",
              "--cross-check"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "I = -1" in out and "Bott-oracle = -1" in out


def test_acm_requires_input(capsys):
    assert run(["acm"]) == 1


def test_acm_from_file(tmp_path, capsys):
    path = tmp_path / "pair.wut"
    write_unitary_tuple(clock_shift(6), path)
    assert run(["acm", "--input", str(path), "--m", "1"]) == 0
    assert "I = -1" in capsys.readouterr().out


def test_verify_bound_command(capsys):
    rc = run(["verify-bound", "--d", "2", "--N", "8", "--m", "1",
              "--kappa", "1"])
    assert rc == 0
    assert "status = pass" in capsys.readouterr().out


def test_sweep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep", "--d", "2", "--N", "8", "--flux", "1,2=1",
            "--sweep", "m=0.5,1.0,1.5"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 4
    # constant index column across the mass window
    with a.open() as fh:
        assert all(row["I"] == "1" for row in csv.DictReader(fh))


def test_sweep_flux_variable(tmp_path):
    out = tmp_path / "k.csv"
    rc = run(["sweep", "--d", "2", "--N", "8",
              "--sweep", "flux:1,2=-1,0,1", "--out", str(out)])
    assert rc == 0
    with out.open() as fh:
        got = [row["I"] for row in csv.DictReader(fh)]
    assert got == ["-1", "0", "1"]


def test_sweep_records_singular_rows(tmp_path):
    out = tmp_path / "s.csv"
    rc = run(["sweep", "--d", "2", "--N", "4", "--flux", "1,2=1",
              "--sweep", "m=1.0,2.0", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[1].endswith("ok")
    assert lines[2].endswith("singular")


def test_sweep_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("WILSON_THREADS", "1")
    out = tmp_path / "t.csv"
    rc = run(["sweep", "--d", "2", "--N", "8", "--flux", "1,2=1",
              "--sweep", "N=4,8", "--out", str(out)])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 3


def test_selftest_failure_exit_code(monkeypatch):
    import wilsonindex.selftest as st

    monkeypatch.setattr(st, "run_selftest", lambda **kw: False)
    assert run(["selftest"]) == 3
