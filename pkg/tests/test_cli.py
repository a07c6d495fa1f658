import json
import os
import subprocess
import sys

import pytest

from koszulkit import cli, suites
from koszulkit.scenario import ScenarioError, load, parse, shipped
from koszulkit.suites import REGISTRY


def write(tmp_path, data, name="s.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def test_list_checks(capsys):
    assert cli.main(["list-checks", "koszul-twisted"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [l.split("\t")[0] for l in lines] == [c.id for c in REGISTRY["koszul-twisted"]]
    assert all(len(l.split("\t")) == 2 for l in lines)


def test_unknown_kind(capsys):
    assert cli.main(["list-checks", "nope"]) == 2
    assert "unknown kind" in capsys.readouterr().err


def test_verify_e1_text_and_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["verify", str(shipped("e1.json")), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "10 pass, 0 fail, 0 inconclusive" in text
    rep = json.loads(out.read_text())
    assert rep["schema"] == "koszulkit-report/1"
    assert [c["id"] for c in rep["checks"]] == [c.id for c in REGISTRY["koszul-twisted"]]
    assert all("seconds" not in c for c in rep["checks"])
    assert rep["parameters"] == {"window": [-6, 6], "length_cap": 6, "poly_trunc": 3}


def test_flags_override_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["verify", str(shipped("e1.json")), "--window", "-3,3", "--cap", "4", "--trunc", "1",
                     "--out", str(out)]) == 0
    assert json.loads(out.read_text())["parameters"] == {"window": [-3, 3], "length_cap": 4, "poly_trunc": 1}


@pytest.mark.parametrize("data, where", [
    ({"kind": "koszul-twisted", "M": [0], "N": [0], "phi": [[1, 2]]}, "phi"),
    ({"kind": "koszul-twisted", "M": [0], "N": [0], "phi": [[1.5]]}, "phi[0][0]"),
    ({"kind": "koszul-twisted", "M": [0], "N": [1], "phi": [[1]]}, "phi"),
    ({"kind": "mystery"}, "kind"),
    ({"kind": "koszul-twisted", "M": [0, 1], "N": [0, -1], "phi": [[1, 0], [0, 1]]}, "M[1]"),
    ({"kind": "koszul-twisted", "window": [3, 1]}, "window"),
    ({"kind": "equivariant", "g_dim": 1, "v_dim": 1, "rho": [[[1, 0]]]}, "rho[0]"),
    ({"kind": "bar-suite", "algebras": []}, "algebras"),
    ({"kind": "koszul-twisted", "M": [{"degree": 1, "parity": "even"}]}, "M[0].parity"),
])
def test_schema_errors(tmp_path, capsys, data, where):
    with pytest.raises(ScenarioError) as exc:
        load(write(tmp_path, data))
    assert exc.value.where == where
    assert cli.main(["verify", write(tmp_path, data)]) == 2
    assert where in capsys.readouterr().err


def test_json_syntax_error_reports_position(tmp_path, capsys):
    assert cli.main(["verify", write(tmp_path, '{"kind": \n  "koszul-twisted",,}')]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_file(capsys):
    assert cli.main(["verify", "/nonexistent/x.json"]) == 2


def test_bad_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", str(shipped("e1.json")), "--window", "5"])
    assert exc.value.code == 2


def test_rationals_accepted():
    sc = parse({"kind": "koszul-twisted", "M": [0], "N": [0], "phi": [["-3/2"]]})
    assert str(sc.koszul.phi[0][0]) == "-3/2"


def test_failing_check_exits_1(monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(suites.TwistedSuite, "semifree", lambda self: ("fail", None, "forced", {}))
    assert cli.main(["verify", str(shipped("empty.json"))]) == 1
    assert "witness: forced" in capsys.readouterr().out


def test_inconclusive_exits_0(monkeypatch, capsys):
    def inconclusive(self):
        raise suites.Inconclusive("too big")
    monkeypatch.setattr(suites.TwistedSuite, "semifree", inconclusive)
    assert cli.main(["verify", str(shipped("empty.json"))]) == 0
    assert "INCONCLUSIVE" in capsys.readouterr().out


def test_internal_error_exits_3(monkeypatch, capsys):
    def boom(self):
        raise RuntimeError("bug")
    monkeypatch.setattr(suites.TwistedSuite, "semifree", boom)
    assert cli.main(["verify", str(shipped("empty.json"))]) == 3
    assert "internal error" in capsys.readouterr().err


def test_console_script_and_log_env(tmp_path):
    env = dict(os.environ, KOSZULKIT_LOG="debug")
    out = subprocess.run([sys.executable, "-m", "koszulkit.cli", "verify", str(shipped("empty.json"))],
                         env=env, capture_output=True, text=True)
    assert out.returncode == 0
    quiet = subprocess.run([sys.executable, "-m", "koszulkit.cli", "verify", str(shipped("empty.json"))],
                           capture_output=True, text=True)
    # verbosity changes only the log stream, never the report
    strip = lambda s: [l.rsplit("s", 1)[0].split()[:2] for l in s.splitlines()]
    assert strip(out.stdout) == strip(quiet.stdout)


def test_json_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", str(shipped("e4.json")), "--out", str(a)]) == 0
    assert cli.main(["verify", str(shipped("e4.json")), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name", sorted(p.name for p in shipped("e1.json").parent.glob("*.json")))
def test_shipped_scenarios_pass(name):
    sc = load(shipped(name))
    results = suites.run_suite(sc)
    assert [r.id for r in results] == [c.id for c in REGISTRY[sc.kind]]
    assert all(r.verdict == "pass" for r in results), [(r.id, r.witness) for r in results if r.verdict != "pass"]


@pytest.mark.parametrize("kind, check", [("bar-suite", "twisting-cochain-condition"),
                                         ("equivariant", "heisenberg-identity"),
                                         ("koszul-twisted", "centralizer-commutation")])
def test_stable_check_ids(kind, check):
    specs = {c.id: c.anchor for c in suites.list_checks(kind)}
    assert check in specs and specs[check]
