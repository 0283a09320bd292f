import csv
import json
import shutil
import subprocess
import sys

import pytest

from qfa_lab.cli import main
from qfa_lab.io import FIXTURES, fixture_path, load_automaton, loads, dumps, to_dict
from qfa_lab.report import default_tol


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return str(fixture_path(name))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qfa_lab", "--json", "simulate", fx("k2.qfa"), "ba"],
                         capture_output=True, text=True, check=True)
    doc = json.loads(res.stdout)
    assert doc["p_acc"] == pytest.approx(2 / 3) and doc["verdict"] == "accept"


def test_simulate_text(capsys):
    code, out, _ = run(capsys, "simulate", fx("k2.qfa"), "")
    assert code == 0
    assert "p_acc = 0.666666666667 (2/3)" in out and "verdict: accept" in out


def test_simulate_json_events(capsys):
    code, out, _ = run(capsys, "simulate", fx("k2.qfa"), "ab", "--json")
    doc = json.loads(out)
    assert [e["letter"] for e in doc["events"]] == ["kappa", "a", "b", "dollar"]
    assert doc["p_rej"] == pytest.approx(2 / 3)


def test_verify(capsys):
    code, out, _ = run(capsys, "--json", "verify", fx("k2.qfa"), "--oracle", fx("g2.dfa"), "--max-len", 8)
    doc = json.loads(out)
    assert doc["p"] == pytest.approx(2 / 3) and doc["recognizes"]


def test_check_t12(capsys):
    code, out, _ = run(capsys, "--json", "check-t12", fx("g1.dfa"))
    doc = json.loads(out)
    assert (doc["q1"], doc["q2"], doc["x"]) == ("q1", "q2", ["b"])
    assert doc["conditions"]["5"] is False
    code, out, _ = run(capsys, "check-t12", fx("even_a.dfa"))
    assert "conclusion" in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", fx("k2.qfa"))
    assert "4 -> 2 -> 2" in out and "dim E1 = 2" in out and "ok" in out


def test_union_build(capsys, tmp_path):
    out_file = tmp_path / "u.qfa"
    code, out, _ = run(capsys, "--json", "union-build", "--k1", fx("parity.qfa"), "--p1", 1,
                       "--k2", fx("k2.qfa"), "--p2", 2 / 3, "-o", out_file)
    assert code == 0 and json.loads(out)["guaranteed_p"] == pytest.approx(4 / 7)
    assert load_automaton(out_file).dim == 13


def test_union_build_limit_case_errors(capsys, tmp_path):
    code, _, err = run(capsys, "union-build", "--k1", fx("k2.qfa"), "--p1", 2 / 3,
                       "--k2", fx("k3.qfa"), "--p2", 2 / 3, "-o", tmp_path / "u.qfa")
    assert code == 2 and "error" in err


def test_points_then_separability(capsys, tmp_path):
    pts = tmp_path / "pts.csv"
    assert run(capsys, "points", "--k1", fx("k2.qfa"), "--k2", fx("k3.qfa"), "--oracle", fx("g1.dfa"),
               "--max-len", 4, "-o", pts)[0] == 0
    rows = list(csv.DictReader(open(pts, encoding="utf-8")))
    assert len(rows) == 31 and rows[0]["word"] == "ε"
    code, out, _ = run(capsys, "separability", "--points", pts)
    assert out.strip() == "none"


def test_separability_line(capsys, tmp_path):
    pts = tmp_path / "p.csv"
    pts.write_text("word,x,y,member\nu,0.2,0.2,0\nv,0.8,0.8,1\n")
    code, out, _ = run(capsys, "--json", "separability", "--points", pts)
    doc = json.loads(out)
    assert doc["margin"] == pytest.approx(0.3 * 2**0.5)


def test_tv_check(capsys):
    code, out, _ = run(capsys, "--json", "tv-check", "--trials", 200, "--eps", 0.01, "--seed", 3)
    assert json.loads(out)["violations"] == 0


def test_corpus(capsys):
    code, out, _ = run(capsys, "corpus", "--max-len", 2)
    assert out.split() == ["ε", "a", "b", "aa", "ab", "ba", "bb"]


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", tmp_path / "nope.qfa", "a")
    assert code == 2


def test_wrong_kind(capsys):
    code, _, err = run(capsys, "check-t12", fx("k2.qfa"))
    assert code == 2 and "expected a DFA" in err


@pytest.fixture(scope="module")
def reproduce_ok():
    res = subprocess.run([sys.executable, "-m", "qfa_lab", "--json", "reproduce-paper"],
                         capture_output=True, text=True)
    return res


def test_reproduce_all_pass(reproduce_ok):
    assert reproduce_ok.returncode == 0
    doc = json.loads(reproduce_ok.stdout)
    assert doc["passed"] and len(doc["rows"]) >= 30


def test_reproduce_perturbed_fixture(tmp_path, capsys):
    for name in FIXTURES:
        shutil.copy(fixture_path(name), tmp_path / name)
    doc = to_dict(load_automaton(tmp_path / "k2.qfa"))
    doc["operators"]["b"][0][0] += 1e-3
    (tmp_path / "k2.qfa").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "reproduce-paper", "--fixtures", tmp_path, "--max-len", 6)
    assert code == 1
    lines = [ln for ln in out.splitlines() if ln.startswith("K2 operators unitary")]
    assert lines and lines[0].rstrip().endswith("FAIL")
    assert "K3 operators unitary" in out


def test_tol_env_override(monkeypatch):
    monkeypatch.setenv("QFA_LAB_TOL", "1e-6")
    assert default_tol() == 1e-6
    monkeypatch.delenv("QFA_LAB_TOL")
    assert default_tol() == 1e-9


def test_tol_env_reaches_table(monkeypatch, capsys):
    monkeypatch.setenv("QFA_LAB_TOL", "1e-7")
    code, out, _ = run(capsys, "--json", "reproduce-paper", "--max-len", 4)
    tols = {r["tol"] for r in json.loads(out)["rows"]}
    assert 1e-7 in tols
