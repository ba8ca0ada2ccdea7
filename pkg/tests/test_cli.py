import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from zetalaurent.cli import OutputTable, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_gamma_cross_method(capsys):
    code, out = run(capsys, "gamma", "--kmax", "5", "--a", "1", "--methods", "hermite,jensen", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["rows"]) == 12
    assert all(r["agrees"] for r in doc["rows"])
    assert set(doc["meta"]) >= {"bits", "tol", "version"}


def test_gamma_shift_two(capsys):
    code, out = run(capsys, "gamma", "--kmax", "0", "--a", "2", "--format", "json")
    value = mpmath.mpf(json.loads(out)["rows"][0]["value"])
    assert code == 0
    assert abs(value - (mpmath.euler - 1)) < 1e-15


@pytest.mark.parametrize("argv", [
    ["gamma", "--kmax", "3", "--a", "-1"],
    ["gamma", "--kmax", "2", "--methods", "bogus"],
    ["s2", "--nmax", "0"],
    ["zeta", "--s", "1,2,3"],
    ["identities", "--classes", "weird"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_s2_single(capsys):
    code, out = run(capsys, "s2", "--nmax", "1", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1
    assert abs(mpmath.mpf(rows[0]["s2"]) - mpmath.euler) < 1e-15


def test_s2_csv(capsys):
    code, out = run(capsys, "s2", "--nmax", "20", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 20
    assert out.splitlines()[0].startswith("n,s2,")
    for r in rows:
        assert float(r["residual"]) <= float(r["tail_model"])


def test_zeta_at_zero(capsys):
    code, out = run(capsys, "zeta", "--s", "0,0", "--lambda", "1", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert code == 0
    assert abs(float(row["re"]) + 0.5) < 1e-15 and abs(float(row["im"])) < 1e-15


def test_bench_ordering(capsys):
    code, out = run(capsys, "bench", "--lambda", "0.5,1", "--k", "1", "--format", "json")
    terms = {r["lambda"]: r["terms"] for r in json.loads(out)["rows"]}
    assert code == 0
    assert terms["1/2"] <= terms["1"]


def test_json_deterministic(capsys):
    argv = ["gamma", "--kmax", "2", "--methods", "hermite,abel_plana", "--format", "json"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_identities_subset(capsys):
    code, out = run(capsys, "identities", "--classes", "exploratory", "--format", "json")
    # exploratory entries never gate the exit code
    assert code == 0
    assert {r["class"] for r in json.loads(out)["rows"]} == {"exploratory"}


def test_cache_commands(tmp_path, capsys):
    path = str(tmp_path / "c.json")
    assert run(capsys, "cache", "fill", "--kmax", "2", "--cache-file", path)[0] == 0
    code, out = run(capsys, "cache", "show", "--cache-file", path, "--format", "json")
    assert len(json.loads(out)["rows"]) == 3
    assert run(capsys, "cache", "show", "--cache-file", path, "--format", "json")[1] == out
    run(capsys, "cache", "clear", "--cache-file", path)
    assert json.loads(run(capsys, "cache", "show", "--cache-file", path, "--format", "json")[1])["rows"] == []


def test_output_table():
    t = OutputTable([("a", ""), ("b", "abs")])
    t.add(1, "x,y")
    with pytest.raises(ValueError):
        t.add(1)
    assert t.render("csv") == 'a,b\n1,"x,y"\n'
    assert t.render("plain").splitlines()[0].split() == ["a", "b"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "zetalaurent", "zeta", "--s", "2", "--lambda", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "1.6449340668" in res.stdout


def test_disagreement_exit_code(capsys):
    code, out = run(capsys, "gamma", "--kmax", "2", "--methods", "hermite,jensen", "--agree-tol", "1e-300",
                    "--format", "json")
    assert code == 1
    assert not all(r["agrees"] for r in json.loads(out)["rows"][3:])
