import io
import json
import subprocess
import sys

import pytest

from pisym.cli import DEFECT, FAILS, INVALID, OK, UNKNOWN, run

RACE_NETWORK = "x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0"
MIXED = "x!.1!.0 + y?().2!.0"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text + "\n", encoding="utf-8")
        return str(path)
    return write


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_prints_canonical_form(files):
    code, out, _ = call("parse", files("p.pi", RACE_NETWORK))
    assert code == OK
    assert out.splitlines()[0] == "x!.0 | x?().out!1.0 + y?().out!2.0"
    assert out.splitlines()[1].startswith("canonical: ")


def test_parse_error_exit_code(files):
    code, _, err = call("parse", files("bad.pi", "0 + 0"))
    assert code == INVALID
    assert "unguarded choice operand" in err


def test_missing_file(tmp_path):
    code, _, err = call("parse", str(tmp_path / "nope.pi"))
    assert code == INVALID and "cannot read" in err


def test_steps_json(files):
    code, out, _ = call("--json", "steps", files("p.pi", "a!b.0 | a?(z).z!.0"))
    doc = json.loads(out)
    assert code == OK and doc["schema"] == "pisym-report/1"
    assert "tau" in [s["label"] for s in doc["steps"]]


def test_explore_nil(files):
    code, out, _ = call("--json", "explore", files("z.pi", "0"))
    doc = json.loads(out)
    assert code == OK
    assert len(doc["executions"]) == 1
    assert doc["executions"][0]["labels"] == [] and doc["executions"][0]["maximal"]


def test_explore_mixed_counterexample(files):
    net = files("net.pi", "new x . new y . ((x!.1!.0 + y?().2!.0) | (y!.2!.0 + x?().1!.0))")
    code, out, _ = call("--json", "explore", net, "--observables", "1,2")
    doc = json.loads(out)
    assert code == OK
    assert sorted(e["labels"] for e in doc["executions"]) == [["tau", "1!", "1!"], ["tau", "2!", "2!"]]


def test_explore_hitting_the_bound_is_unknown(files):
    code, _, _ = call("explore", files("r.pi", "!tau.0"), "--max-depth", "3")
    assert code == UNKNOWN


def test_symnet(files):
    code, out, _ = call("symnet", "--base", files("p.pi", RACE_NETWORK), "--perm", "x>y,y>x", "--degree", "2")
    assert code == OK
    assert "y?().out!1.0 + x?().out!2.0" in out


def test_symnet_rejects_bad_permutations(files):
    base = files("p.pi", RACE_NETWORK)
    assert call("symnet", "--base", base, "--perm", "x>y", "--degree", "2")[0] == INVALID
    assert call("symnet", "--base", base, "--perm", "x>y,y>x", "--degree", "3")[0] == INVALID
    assert call("symnet", "--base", base, "--perm", "x>y,y>x", "--degree", "2", "--restrict", "x")[0] == INVALID


def test_symexec_race_network(files, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = call("--report", str(report), "symexec", "--base", files("p.pi", RACE_NETWORK),
                        "--perm", "x>y,y>x", "--degree", "2")
    assert code == OK
    doc = json.loads(report.read_text())
    assert [r["labels"] for r in doc["rounds"]] == [["tau", "tau"], ["out!1", "out!1"]]
    assert doc["sigmaChain"] == ["x>y,y>x"] * 3
    assert doc["truncated"] is False
    assert "round 0: [tau, tau]" in out


def test_symexec_refuses_mixed_choice(files):
    code, _, err = call("symexec", "--base", files("m.pi", MIXED), "--perm", "x>y,y>x,1>2,2>1",
                        "--degree", "2", "--restrict", "x,y")
    assert code == INVALID and "mixed choice" in err


def test_find_symexec(files):
    mixed = files("m.pi", MIXED)
    code, out, _ = call("find-symexec", "--base", mixed, "--perm", "x>y,y>x,1>2,2>1", "--degree", "2", "--restrict", "x,y")
    assert code == FAILS and "no" in out
    code, _, _ = call("find-symexec", "--base", files("p.pi", RACE_NETWORK), "--perm", "x>y,y>x", "--degree", "2")
    assert code == OK


def test_subdivide_from_saved_report(files, tmp_path):
    report = tmp_path / "sx.json"
    base = files("e.pi", "new x . a!x . x! . 0")
    assert call("--report", str(report), "symexec", "--base", base, "--degree", "2")[0] == OK
    code, out, _ = call("--json", "subdivide", "--exec", str(report), "--degree-prime", "1")
    doc = json.loads(out)
    assert code == OK
    assert [r["labels"] for r in doc["rounds"]] == [["a!(x)"], ["x!"]]


def test_subdivide_rejects_forged_report(files, tmp_path):
    report = tmp_path / "sx.json"
    base = files("e.pi", "new x . a!x . x! . 0")
    call("--report", str(report), "symexec", "--base", base, "--degree", "2")
    doc = json.loads(report.read_text())
    doc["execution"]["rounds"][1]["steps"][0]["label"] = "x!q"
    report.write_text(json.dumps(doc))
    assert call("subdivide", "--exec", str(report), "--degree-prime", "1")[0] == INVALID
    report.write_text("{}")
    assert call("subdivide", "--exec", str(report), "--degree-prime", "1")[0] == INVALID


def test_check_commands(files):
    pair = files("b.pi", "(a?().slave!.0 + a!.leader!.0) | (a?().slave!.0 + a!.leader!.0)")
    single = files("s.pi", "a?().slave!.0 + a!.leader!.0")
    assert call("check", "leader-election", pair, "--leader", "leader", "--slave", "slave")[0] == OK
    assert call("check", "leader-election", single, "--leader", "leader", "--slave", "slave",
                "--components", "1")[0] == FAILS
    assert call("check", "leader-election", pair)[0] == INVALID
    succ = files("c.pi", "a?().0 + a!.check")
    assert call("check", "must-succeed", succ)[0] == FAILS
    assert call("check", "must-succeed", files("r.pi", "!tau.0"), "--max-depth", "5")[0] == UNKNOWN
    assert call("check", "can-step", files("m.pi", "a?().0 + a!.0"))[0] == FAILS
    assert call("check", "can-step", files("m.pi", "a?().0 + a!.0"), "--mode", "any")[0] == OK


def test_check_leader_indexed(files):
    net = files("n.pi", f"({RACE_NETWORK}) | (y! . 0 | y?() . out!1 . 0 + x?() . out!2 . 0)")
    code, out, _ = call("--json", "check", "leader-indexed", net, "--out", "out")
    assert code == OK and json.loads(out)["verdict"]["outcome"] == "holds"


def test_confluence(files):
    assert call("confluence", files("p.pi", "a!b.0 | a?(z).z!.0"))[0] == OK
    mixed = files("m.pi", "a?().0 + a!.0")
    assert call("confluence", mixed)[0] == INVALID
    assert call("confluence", mixed, "--allow-mixed")[0] == FAILS


def test_verify_corpus_subset():
    code, out, _ = call("verify-paper", "--only", "3", "5", "6", "7")
    assert code == OK
    assert out.count("[PASS]") == 4


def test_exit_codes_are_distinct():
    assert len({OK, INVALID, FAILS, UNKNOWN, DEFECT}) == 5


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pisym.cli", "parse", files("z.pi", "0")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("0")
