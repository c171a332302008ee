import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

from qconvex import cli
from qconvex.errors import MismatchError


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def check_schema(report):
    assert set(report) == {"task", "parameters", "verdicts", "timing_ms", "artifact_version"}
    assert isinstance(report["timing_ms"], int)
    for e in report["verdicts"]:
        assert set(e) == {"n", "verdict", "witness", "detail"}
        assert e["verdict"] in ("pass", "fail", "skipped")
        if e["verdict"] == "fail":
            assert e["witness"] is not None or e["detail"]


def test_identities_json(capsys):
    code, rep = run_json(capsys, "identities", "--n-max", "6", "--format", "json")
    assert code == 0
    check_schema(rep)
    assert [e["n"] for e in rep["verdicts"]] == [2, 3, 4, 5, 6]
    assert all(e["detail"]["lemma22"] and e["detail"]["eq22"] for e in rep["verdicts"])


def test_parity_csv(capsys):
    assert cli.run(["parity", "--n-max", "16", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [int(r["n"]) for r in rows] == list(range(2, 17))
    for r in rows:
        assert r["central_odd"] == r["is_mersenne"]
    assert {int(r["n"]) for r in rows if r["is_mersenne"] == "True"} == {3, 7, 15}


def test_scan_conjecture_small(capsys):
    code, rep = run_json(capsys, "scan-conjecture", "--odd-n-max", "9")
    assert code == 0
    assert [e["n"] for e in rep["verdicts"]] == [3, 5, 7, 9]


def test_jobs_preserve_order(capsys):
    code, rep = run_json(capsys, "certify-convexity", "--n-max", "7", "--jobs", "3")
    assert code == 0
    assert [e["n"] for e in rep["verdicts"]] == list(range(2, 8))


def test_exit_1_on_counterexample(capsys):
    # the X expansion at m = 1 has negative coefficients
    code, rep = run_json(capsys, "coeffs", "--which", "X-expansion", "--n-min", "1", "--n-max", "2")
    assert code == 1
    bad = [e for e in rep["verdicts"] if e["verdict"] == "fail"]
    assert [e["n"] for e in bad] == [1]
    assert bad[0]["witness"] is not None


def test_exit_2_usage(capsys):
    assert cli.run(["identities", "--n-min", "1"]) == 2
    assert cli.run(["no-such-command"]) == 2
    assert cli.run(["certify"]) == 2
    assert cli.run(["problems", "--which", "E", "--t-list", "1/2"]) == 2
    assert cli.run(["figure-data", "--which", "F4-curve", "--grid-size", "1"]) == 2
    capsys.readouterr()


def test_exit_3_contract_violation(monkeypatch, capsys):
    def broken(n):
        raise MismatchError("forced", 1, 2)

    monkeypatch.setattr(cli, "_w_identities", broken)
    assert cli.run(["identities", "--n-max", "3"]) == 3
    assert "internal error" in capsys.readouterr().err


def test_exit_3_unwritable(tmp_path, capsys):
    target = tmp_path / "missing" / "out.json"
    assert cli.run(["parity", "--n-max", "4", "-o", str(target)]) == 3
    capsys.readouterr()


def test_output_file(tmp_path):
    target = tmp_path / "r.json"
    assert cli.run(["coeffs", "--which", "ak", "-o", str(target)]) == 0
    rep = json.loads(target.read_text())
    assert rep["verdicts"][0]["detail"]["computed"] == "2225214522"
    assert len(rep["verdicts"]) == 13


def test_L3_coeffs(capsys):
    code, rep = run_json(capsys, "coeffs", "--which", "L3")
    assert code == 0
    assert [e["detail"]["computed"] for e in rep["verdicts"][:11]] == [33, 258, 691, 1012, 913, 548, 249, 108, 46, 14, 2]


def test_figure_data(tmp_path):
    f4 = tmp_path / "f4.csv"
    assert cli.run(["figure-data", "--which", "F4-curve", "--grid-size", "21", "-o", str(f4)]) == 0
    rows = list(csv.reader(f4.open()))
    assert rows[0] == ["x", "value"]
    data = {Fraction(x): v for x, v in rows[1:]}
    assert data[Fraction(0)] == "6"
    assert min(data) == -1 and max(data) == 1
    xs = [Fraction(x) for x, _ in rows[1:]]
    assert all(a < b for a, b in zip(xs, xs[1:]))

    c4 = dict((Fraction(x), float(v)) for x, v in cli.figure_rows("C4-curve", 41))
    assert c4[Fraction(0)] == 1 and c4[Fraction(1)] == 14
    assert all(v >= 1 for v in c4.values())

    l5 = cli.figure_rows("L5-curve", 40)
    assert l5[0][0] > 1 and l5[-1][0] == 5
    assert all(v > 0 for _, v in l5)


def test_problem_W(capsys):
    rep = cli.problem_W_scan(3, grid_size=64)
    check_schema(rep)
    assert all(e["verdict"] == "pass" for e in rep["verdicts"])


def test_problem_E(capsys):
    rep = cli.problem_E_scan([Fraction(2), Fraction(3, 2), Fraction(10)], grid_size=4001)
    check_schema(rep)
    assert all(e["verdict"] == "pass" for e in rep["verdicts"])
    t2 = rep["verdicts"][0]["detail"]
    assert t2["caveat_confirmed"]
    assert 0.5 < t2["second_summand_local_max"][0] < 1.0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "qconvex", "identities", "--n-max", "3"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert json.loads(r.stdout)["task"] == "identities"
