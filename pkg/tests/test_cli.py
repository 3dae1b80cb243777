import json
import subprocess
import sys

import pytest

from arrtopo.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, diff_expected, golden_dir, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_json(capsys):
    code, out, _ = run(["invariants", "--catalog", "braid-A3", "--json"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["result"]["betti_U"] == [1, 5, 6]
    assert doc["result"]["multiple_points"] == [3, 3, 3, 3]


def test_output_is_byte_identical(capsys):
    argv = ["boundary", "--catalog", "near-pencil:4", "--json", "--seed", "3"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


def test_text_output(capsys):
    code, out, _ = run(["milnor", "--catalog", "braid-A3"], capsys)
    assert code == EXIT_OK
    assert "charpoly: \"(t-1)^5*Phi3\"" in out


def test_expect_mismatch(tmp_path, capsys):
    gold = tmp_path / "g.json"
    gold.write_text(json.dumps({"expect": {"charpoly_q1_str": "(t-1)^5"}}))
    code, out, err = run(["milnor", "--catalog", "braid-A3", "--expect", str(gold)], capsys)
    assert code == EXIT_MISMATCH
    assert "expectation mismatch" in err


def test_budget_exit(capsys):
    code, _, err = run(["covers", "--catalog", "braid-A3", "--chi", "1,1,1,1,1,1", "--budget-cols", "10"], capsys)
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_input_errors(tmp_path, capsys):
    assert run(["invariants", "--catalog", "nope"], capsys)[0] == EXIT_INPUT
    assert run(["invariants"], capsys)[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "forms": [[1, 0, 0],\n   [0, 1 0]]\n}\n')
    code, _, err = run(["invariants", "--input", str(bad)], capsys)
    assert code == EXIT_INPUT and "line 3" in err
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"forms": [[1, 0, 0], [2, 0, 0]]}))
    assert run(["invariants", "--input", str(dup)], capsys)[0] == EXIT_INPUT


def test_polynomial_input_file(tmp_path, capsys):
    f = tmp_path / "a.txt"
    f.write_text("x*y*z*(x+y+z)\n")
    code, out, _ = run(["boundary", "--input", str(f), "--json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["result"]["bdF_charpoly"] == "(t-1)^6"


def test_resonance_vector(capsys):
    code, out, _ = run(["resonance", "--catalog", "non-fano", "--vector", "0,0,0,1,1,1,1", "--field", "2",
                        "--json"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)["result"]
    assert doc["depth"]["value"] == 2
    assert doc["census"] == {"local": 6, "multinet_essential": 0, "multinet_sub": 3}


def test_covers_skips_bad_primes(capsys):
    code, out, _ = run(["covers", "--catalog", "braid-A3", "--chi", "1,1,1,1,1,1", "--json"], capsys)
    assert code == EXIT_OK
    doc = json.loads(out)["result"]
    assert doc["skipped_primes"] == [2, 3]
    assert doc["integral_h1"] == {"rank": 7, "torsion": []}


@pytest.mark.parametrize("path", sorted(p.name for p in golden_dir().iterdir() if p.name.endswith(".json")))
def test_golden_file(path, capsys):
    doc = json.loads((golden_dir() / path).read_text())
    code, out, _ = run(doc["argv"] + ["--expect", str(golden_dir() / path), "--json"], capsys)
    assert code == EXIT_OK, out


def test_diff_expected():
    assert diff_expected({"a": 1, "b": {"c": [1, 2]}}, {"a": 1, "b": {"c": [1, 2], "d": 0}}) == []
    assert diff_expected({"a": 2}, {"a": 1}) == ["/a: expected 2, got 1"]
    assert diff_expected({"x": 1}, {}) == ["/x: missing"]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "arrtopo.cli", "golden", "--json"], capture_output=True, text=True)
    assert r.returncode == 0
    assert all(x["ok"] for x in json.loads(r.stdout)["results"])
