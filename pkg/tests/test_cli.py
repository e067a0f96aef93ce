import json
import shutil
import subprocess

import pytest

from gradval.cli import main


def run(capsys, *argv):
    code = main(list(argv) + ["--no-timestamp"])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "10*u^(1)", "--valuation", "R5h")
    assert code == 0
    assert out["value"] == "3/2" and out["member"] is True


def test_eval_default_field(capsys):
    code, out, _ = run(capsys, "eval", "i*u^(1) + 1")
    assert code == 0 and len(out["terms"]) == 2


def test_parse_error_exit(capsys):
    code, out, err = run(capsys, "eval", "u^(")
    assert code == 2 and out is None
    assert "column 4" in err


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "suite", "bogus")
    assert code == 2 and "unknown suite" in err


@pytest.mark.parametrize("name", ["efn", "artin", "pairing", "orbits", "dominate", "neighborhood", "torsor"])
def test_suites_pass(capsys, name):
    code, out, _ = run(capsys, "suite", name)
    assert code == 0 and out["verdict"] == "PASS"


def test_extend(capsys):
    code, out, _ = run(capsys, "extend", "--valuation", "R5", "--extension", "KB/QZ")
    assert code == 0
    assert (out["e"], out["f"], out["n"]) == (1, 2, 2)
    assert len(out["extensions"]) == 2


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--group", "conj", "--valuation", "R5")
    assert code == 0 and out["transitive"]


def test_orbit_wrong_field(capsys):
    code, _, _ = run(capsys, "orbit", "--group", "conj", "--valuation", "A+")
    assert code == 2


def test_neighborhood(capsys):
    code, out, _ = run(capsys, "neighborhood", "--model", "M5", "--scenario", "near-A")
    assert code == 0
    (res,) = out["results"]
    assert res["F"] == ["1*u^(-1)"] and all(res["checks"].values())


def test_neighborhood_command_line_sets(capsys):
    code, out, _ = run(capsys, "neighborhood", "--model", "M6", "--S", "A+,A-", "--U", "eta,A+,A-,D+,D-")
    assert code == 0 and "E" not in out["results"][0]["points"]


def test_torsor_exit_codes(capsys):
    assert run(capsys, "torsor", "--group", "conj")[0] == 0
    code, out, _ = run(capsys, "torsor", "--group", "trivial2")
    assert code == 1 and out["verdict"] == "FAIL" and out["witness"]


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--table", "padic5")
    assert code == 0 and out["certificate"] == "NONE"
    code, out, _ = run(capsys, "certify", "--table", "square")
    assert code == 1 and out["certificate"]["rule"] == "III" and out["replays"]


def test_deterministic_output(capsys):
    a = run(capsys, "neighborhood", "--model", "M6")
    b = run(capsys, "neighborhood", "--model", "M6")
    assert a == b


def test_timestamp_and_out_file(tmp_path, capsys):
    p = tmp_path / "r.json"
    assert main(["eval", "1", "--out", str(p)]) == 0
    assert "generated" in json.loads(p.read_text())
    assert capsys.readouterr().out == ""


def test_extra_config(tmp_path, capsys):
    p = tmp_path / "c.yaml"
    p.write_text("valuations:\n  R7: {graded: QZ, v1: {kind: prime, generator: '7'}, psi: [['0']]}\n")
    code, out, _ = run(capsys, "eval", "7*u^(1)", "--valuation", "R7", "--config", str(p))
    assert code == 0 and out["value"] == "1"


def test_bad_config(tmp_path, capsys):
    p = tmp_path / "c.yaml"
    p.write_text("nonsense: {}\n")
    assert run(capsys, "eval", "1", "--config", str(p))[0] == 2


@pytest.mark.skipif(shutil.which("gradval") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["gradval", "eval", "5", "--valuation", "R5", "--no-timestamp"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == "1"
