import csv
import subprocess
import sys

import pytest

from lamspace import experiments
from lamspace.cli import main
from lamspace.encodings import BITS, scott_string, toy
from lamspace.experiments import CSV_COLUMNS
from lamspace.terms import App, render


def out_of(capsys):
    return capsys.readouterr().out


def field(text, key):
    for line in text.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise KeyError(key)


def test_eval_identity(capsys):
    assert main(["eval", "--machine", "space", "--expr", r"(\x.x)(\y.y)", "--fuel", "100"]) == 0
    out = out_of(capsys)
    assert field(out, "beta_steps") == "1"
    assert field(out, "result").startswith("\\")


def test_eval_naive_vs_space(capsys):
    expr = render(App(toy(), scott_string(BITS, "0101")))
    assert main(["eval", "--machine", "naive", "--expr", expr]) == 0
    naive = int(field(out_of(capsys), "max_bit_space"))
    assert main(["eval", "--machine", "space", "--expr", expr]) == 0
    space = int(field(out_of(capsys), "max_bit_space"))
    assert naive > space


def test_eval_time_heap(capsys):
    assert main(["eval", "--machine", "time", "--expr", r"(\x.x)(\y.y)"]) == 0
    out = out_of(capsys)
    assert int(field(out, "heap_cells")) > 0
    assert field(out, "max_abstract_space") == "-"


def test_eval_errors(capsys):
    assert main(["eval", "--expr", r"(\x.x"]) == 2
    assert main(["eval", "--expr", r"\x.y"]) == 2
    assert main(["eval", "--expr", r"(\x.x x)(\x.x x)", "--fuel", "100"]) == 3
    assert "not reached" in out_of(capsys)


def test_eval_trace_and_csv(tmp_path, capsys):
    path = tmp_path / "one.csv"
    assert main(["eval", "--expr", r"(\x.x)(\y.y)", "--trace", "--csv", str(path)]) == 0
    assert "trace:" in out_of(capsys)
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == 1 and rows[0]["beta_steps"] == "1"


def test_eval_from_file(tmp_path, capsys):
    p = tmp_path / "t.lam"
    p.write_text("(\\x.x)\n  (\\y.y)\n")
    assert main(["eval", "--file", str(p)]) == 0


def test_tm_both(capsys):
    assert main(["tm", "--desc", "parity", "--input", "11", "--via", "both"]) == 0
    out = out_of(capsys)
    assert "direct: accept" in out and "space-kam: accept" in out and "agree" in out
    assert main(["tm", "--desc", "always_accept", "--input", "", "--via", "both"]) == 0
    assert "agree" in out_of(capsys)
    assert main(["tm", "--desc", "parity", "--input", "1", "--via", "direct"]) == 0
    assert "direct: reject" in out_of(capsys)


def test_tm_errors(tmp_path, capsys):
    assert main(["tm", "--desc", "parity", "--input", "12"]) == 2
    bad = tmp_path / "bad.tm"
    bad.write_text("states: a\n")
    assert main(["tm", "--desc", str(bad)]) == 2
    assert main(["tm", "--desc", "loop", "--input", "0", "--via", "direct", "--fuel", "100"]) == 3


def test_addr(capsys):
    assert main(["addr", "--expr", r"(\x.x)(\y.y)", "--address", ""]) == 0
    assert out_of(capsys).strip() == "Lambda"
    assert main(["addr", "--expr", r"(\x.x)(\y.y)", "--address", "0"]) == 0
    assert "1" in out_of(capsys)
    assert main(["addr", "--expr", r"\x.x", "--address", "2"]) == 2


def test_experiment_csv_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["experiment", "toy", "--min", "2", "--max", "8", "--machine", "space,time"]
    assert main(args + ["--csv", str(a)]) == 0
    assert main(args + ["--csv", str(b)]) == 0
    assert a.read_text() == b.read_text()
    rows = list(csv.reader(open(a)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 7 * 2
    out = out_of(capsys)
    assert "toy space max_abstract_space: constant (expected)" in out


def test_experiment_contradiction(tmp_path, monkeypatch, capsys):
    monkeypatch.setitem(experiments.EXPECTED, ("toy", "space", "max_abstract_space"), "linear")
    args = ["experiment", "toy", "--min", "2", "--max", "8", "--csv", str(tmp_path / "c.csv")]
    assert main(args) == 1
    assert "expected linear" in out_of(capsys)


def test_experiment_bad_range(tmp_path, capsys):
    assert main(["experiment", "toy", "--min", "5", "--max", "2", "--csv", str(tmp_path / "x.csv")]) == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "lamspace.cli", "eval", "--expr", r"(\x.x)(\y.y)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "beta_steps: 1" in r.stdout
