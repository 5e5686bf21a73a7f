import csv
import io
import json
import math
import subprocess
import sys

import pytest

from trianglekit import __version__
from trianglekit.behavior import sample_no_disturbance
from trianglekit.cli import run
from trianglekit.inequality import objective_for
from trianglekit.scenario import make_kcbs_chsh_hybrid


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def report(*argv):
    code, text = call(*argv)
    assert code == 0, text
    return json.loads(text)


@pytest.fixture(scope="module")
def fixtures(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    rep = report("fixtures", "--emit", str(d))
    assert {item["name"] for item in rep["items"]} >= {"p1", "p2", "nc", "chsh_quantum", "kcbs_quantum"}
    return d


def item(rep):
    assert len(rep["items"]) == 1
    return rep["items"][0]


def test_eval_p1(fixtures):
    rep = report("eval", "--behavior", str(fixtures / "p1.json"), "--inequality", "gnc:3")
    r = item(rep)
    assert (r["value"], r["bound"], r["violated"]) == (3.0, 1.0, True)
    assert rep["version"] == __version__
    assert rep["command"][0] == "eval"
    assert rep["seed"] is None


@pytest.mark.parametrize(
    "name, inequality, value, violated",
    [
        ("p1", "specker", 1.5, True),
        ("p1", "gne:3", 0.0, False),
        ("p2", "gne:3", 2.0, True),
        ("p2", "gnc:3", 2.0, True),
        ("nc", "gnc:3", 1.0, False),
        ("nc", "gne:3", 0.0, False),
        ("chsh_quantum", "gnc:4", 2 * math.sqrt(2), True),
        ("kcbs_quantum", "excl:5", math.sqrt(5), True),
        ("kcbs_quantum_gnc", "gnc:5", 4 * math.sqrt(5) - 5, True),
    ],
)
def test_round_trip_reproduces_values(fixtures, name, inequality, value, violated):
    r = item(report("eval", "--behavior", str(fixtures / f"{name}.json"), "--inequality", inequality))
    assert r["value"] == pytest.approx(value, abs=1e-9)
    assert r["violated"] == violated


def test_eval_chained_with_kind(fixtures):
    r = item(report("eval", "--behavior", str(fixtures / "p2.json"), "--inequality", "chained:3", "--kind", "entropic"))
    assert r["lhs_value"] == pytest.approx(2.0)
    assert r["rhs_value"] == pytest.approx(0.0, abs=1e-12)
    assert not r["satisfied"]


def test_jpd(fixtures):
    r = item(report("jpd", "--behavior", str(fixtures / "nc.json")))
    assert r["exists"]
    assert [w["weight"] for w in r["weights"]] == [0.5, 0.5]
    assert r["weights"][1]["assignment"] == {"X1": -1, "X2": -1, "X3": -1}
    r = item(report("jpd", "--behavior", str(fixtures / "chsh_quantum.json")))
    assert not r["exists"] and r["certificate"]


def test_assert_satisfied_exit_codes(fixtures):
    code, _ = call("--assert-satisfied", "eval", "--behavior", str(fixtures / "p1.json"), "--inequality", "gnc:3")
    assert code == 1
    code, _ = call("--assert-satisfied", "eval", "--behavior", str(fixtures / "nc.json"), "--inequality", "gnc:3")
    assert code == 0
    code, _ = call("--assert-satisfied", "jpd", "--behavior", str(fixtures / "p2.json"))
    assert code == 1


def test_input_errors_exit_2(tmp_path, capsys):
    assert call("eval", "--behavior", str(tmp_path / "missing.json"), "--inequality", "gnc:3")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("jpd", "--behavior", str(bad))[0] == 2
    assert call("maximize", "--scenario", "dodecagon", "--objective", "gnc:3")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("eval", "--behavior")[0] == 2
    assert "usage" in capsys.readouterr().err


def test_wrong_inequality_for_scenario_is_input_error(fixtures):
    assert call("eval", "--behavior", str(fixtures / "p1.json"), "--inequality", "gnc:4")[0] == 2
    assert call("eval", "--behavior", str(fixtures / "p1.json"), "--inequality", "excl:4")[0] == 2


def test_maximize_by_name_and_file(tmp_path):
    r = item(report("maximize", "--scenario", "cycle:5", "--objective", "excl:5"))
    assert r["value"] == pytest.approx(2.5)
    path = tmp_path / "obj.json"
    path.write_text(json.dumps(objective_for("gnc:4").to_dict()))
    r = item(report("maximize", "--scenario", "cycle:4", "--objective", str(path)))
    assert r["value"] == pytest.approx(4.0)
    assert r["witness"]["scenario"]["variables"] == ["X1", "X2", "X3", "X4"]


def test_quantum_max_is_deterministic():
    argv = ("quantum-max", "--target", "gnc:4", "--restarts", "3", "--seed", "7")
    a, b = report(*argv), report(*argv)
    a.pop("duration_s"), b.pop("duration_s")
    assert a == b
    assert a["seed"] == 7
    assert item(a)["value"] == pytest.approx(2 * math.sqrt(2), abs=1e-3)


def test_floats_have_twelve_significant_digits():
    r = item(report("quantum-max", "--target", "gnc:4", "--restarts", "2", "--seed", "1"))
    assert r["value"] == float(f"{r['value']:.12g}")
    assert all(p == float(f"{p:.12g}") for p in r["parameters"])


def test_monogamy_commands(tmp_path):
    r = item(report("monogamy", "--relation", "mono-bound:tripartite"))
    assert r["value"] == pytest.approx(4.0)
    path = tmp_path / "h.json"
    sample_no_disturbance(make_kcbs_chsh_hybrid(), 0).save(path)
    r = item(report("--assert-satisfied", "monogamy", "--behavior", str(path), "--relation", "mono:hybrid:entropic"))
    assert r["satisfied"] and r["kind"] == "entropic"
    assert call("monogamy", "--behavior", str(path), "--relation", "mono:tripartite:covariance")[0] == 2
    assert call("monogamy", "--relation", "mono-bound:hybrid:entropic")[0] == 2
    assert call("monogamy", "--relation", "mono:hybrid:covariance")[0] == 2


def test_axioms_command():
    rep = report("--assert-satisfied", "axioms", "--kind", "entropic", "--samples", "300", "--seed", "2")
    r = item(rep)
    assert r["failures"] == {"nonnegative": 0, "symmetric": 0, "triangle": 0, "identity": 0}
    assert rep["seed"] == 2


def test_csv_output(fixtures):
    code, text = call("--format", "csv", "eval", "--behavior", str(fixtures / "p1.json"), "--inequality", "specker")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 1
    assert float(rows[0]["value"]) == 1.5 and rows[0]["violated"] == "True"


def test_module_entry_point(fixtures):
    proc = subprocess.run(
        [sys.executable, "-m", "trianglekit", "eval", "--behavior", str(fixtures / "p2.json"), "--inequality", "gnc:3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["items"][0]["value"] == 2.0
