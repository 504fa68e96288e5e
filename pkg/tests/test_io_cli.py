import json
import subprocess
import sys

import pytest

from hml.cli import main, run_command
from hml.io import ParseError, ValidationError, Workspace, load_workspace, serialize_document
from hml.linalg import GF, QQ

from conftest import FIXTURES

SHIPPED = sorted(FIXTURES.glob("*.json"))
MALFORMED = sorted((FIXTURES / "malformed").glob("*.json"))


def run(*argv):
    return run_command([str(a) for a in argv])


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    ws = Workspace(default=QQ)
    ws.load(path)
    assert serialize_document(ws, path) == path.read_text()


def test_bundle_loads_everything():
    ws = load_workspace([FIXTURES / "dual-bundle.json"])
    assert {"A", "simple", "regular", "incl", "proj", "x", "cx", "cx-id"} <= set(ws.entries)
    assert ws.entries["simple"].source.endswith("dual-bundle.json")


def test_duplicate_names_rejected(tmp_path):
    a = tmp_path / "one" / "dual.json"
    a.parent.mkdir()
    a.write_text((FIXTURES / "dual.json").read_text())
    with pytest.raises(ValidationError, match="duplicate"):
        load_workspace([FIXTURES / "dual.json", a])


def test_bad_action_names_the_pair():
    with pytest.raises(ValidationError, match=r"\(1, 1\)"):
        load_workspace([FIXTURES / "malformed" / "bad-action.json"])


def test_syntax_error_has_position():
    with pytest.raises(ParseError, match="line 3 column"):
        load_workspace([FIXTURES / "malformed" / "bad-syntax.json"])


def test_field_default_from_environment(tmp_path, monkeypatch):
    doc = json.loads((FIXTURES / "dual.json").read_text())
    del doc["field"]
    path = tmp_path / "plain.json"
    path.write_text(json.dumps(doc))
    monkeypatch.setenv("HML_FIELD", "Fp:5")
    assert load_workspace([path]).get("plain").field == GF(5)
    monkeypatch.delenv("HML_FIELD")
    assert load_workspace([path]).get("plain").field == QQ


def test_mixed_fields_rejected(tmp_path):
    doc = json.loads((FIXTURES / "k.json").read_text())
    doc["field"] = "Fp:5"
    doc["algebraRef"] = str(FIXTURES / "dual.json")
    path = tmp_path / "k5.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ValidationError, match="module over"):
        load_workspace([path])


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.name)
def test_malformed_exit_two(path):
    res = run("cohomology", "--complex", path)
    assert res.status == "parse-error" and res.exit_code == 2
    assert res.diagnostics


def test_cli_ext_example(monkeypatch):
    monkeypatch.chdir(FIXTURES)
    res = run("ext", "--algebra", "dual.json", "--m", "k.json", "--n", "k.json", "--max-degree", 6)
    assert res.status == "ok" and res.payload["dims"] == [1] * 7


def test_cli_k3_chi_example(monkeypatch):
    monkeypatch.chdir(FIXTURES)
    res = run("k3", "chi", "--h2", "rational-curves.json", "--v", "0,(1,0),1", "--w", "0,(0,1),1")
    assert res.payload == {"chi": -1}


def test_exit_codes(monkeypatch):
    monkeypatch.chdir(FIXTURES)
    assert run("chi", "--m", "k.json", "--n", "k.json").exit_code == 3
    res = run("check", "base-change", "--phi", "phi.json", "--phi-u", "phi.json", "--m", "point-k.json")
    assert res.exit_code == 1
    assert run("check", "base-change", "--phi", "phi.json", "--phi-u", "dual-id.json",
               "--m", "point-k.json").exit_code == 0
    assert run("nonsense").exit_code == 2
    assert run("ext", "--m", "k.json").exit_code == 2
    assert run("ext", "--m", "missing.json", "--n", "k.json").exit_code == 2


def test_checks_through_cli(monkeypatch):
    monkeypatch.chdir(FIXTURES)
    b = ("--load", "dual-bundle.json")
    for argv in (["tr2", "--map", "x"], ["octahedron", "--f", "x", "--g", "x"],
                 ["windmill", "--f", "x", "--g", "x"],
                 ["tr3", "--c", "x", "--d", "x", "--f", "x", "--f2", "x"],
                 ["ses-triangle", "--f", "incl", "--g", "proj"],
                 ["les", "--f", "incl", "--g", "proj", "--fixed", "simple", "--side", "first"]):
        res = run("check", *argv, *b)
        assert res.status == "ok", (argv, res.diagnostics)
    res = run("check", "adjunction", "--phi", "phi.json", "--m", "k.json", "--n", "point-k.json")
    assert res.payload["lhs"] == res.payload["rhs"] == [1] * 5


def test_k3_commands(monkeypatch):
    monkeypatch.chdir(FIXTURES)
    k = ("--load", "k3-small.json")
    assert run("k3", "hodge", *k, "--h2", "h2", "--g", "minus", "--period", "sigma").payload == \
        {"hodge": True, "witness": [-1, 0]}
    assert run("k3", "ns", *k, "--h2", "h2", "--period", "sigma").payload["gram"] == [[-2]]
    res = run("k3", "orient", *k, "--h2", "h2-ample", "--g", "h2sign:-1", "--period", "sigma-ample",
              "--ample", "0,0,1,0")
    assert res.payload["preserves"] is False
    res = run("k3", "fm", *k, "--h2", "h2", "--kernel", "delta", "--beta", "2,(1,0,-1),5")
    assert res.payload == {"r": 2, "c": [1, 0, -1], "s": 5}
    res = run("k3", "vector", *k, "--h2", "h2", "--rk", 0, "--c1", "0,0,1", "--c2", -2)
    assert res.payload == {"r": 0, "c": [0, 0, 1], "s": 1}


def test_output_is_deterministic(monkeypatch, capsys):
    monkeypatch.chdir(FIXTURES)
    argv = ["resolve", "--m", "k.json", "--depth", "3", "--json"]
    outs = []
    for _ in range(2):
        assert main(argv) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["dims"] == {"-3": 2, "-2": 2, "-1": 2, "0": 2}


def test_table_sorted_and_errors_on_stderr(monkeypatch, capsys):
    monkeypatch.chdir(FIXTURES)
    assert main(["tor", "--m", "k.json", "--n", "k.json", "--max-degree", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [ln.split()[0] for ln in lines] == ["degree", "0", "1", "2"]
    assert main(["ext", "--m", "malformed/bad-syntax.json", "--n", "k.json"]) == 2
    cap = capsys.readouterr()
    assert cap.out == "" and "line 3" in cap.err


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "hml.cli", "k3", "pair", "--h2",
                          str(FIXTURES / "rational-curves.json"), "--v", "0,(1,0),1",
                          "--w", "0,(1,0),1", "--json"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout) == {"pair": -2}
