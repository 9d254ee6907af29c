import json
import subprocess
import sys

import pytest

from sepsos.cli import main
from sepsos.fixtures import appendix_q, choi_polynomial
from sepsos.maps import MatrixMap, identity_map, map_to_biquadratic
from sepsos.states import maximally_entangled, maximally_mixed


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "sepsos.cli", *args], capture_output=True, text=True, cwd=cwd)


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_fixtures_list_and_emit(tmp_path):
    r = run("fixtures", "list")
    assert r.returncode == 0
    assert "appendix-q" in r.stdout.split()
    out = tmp_path / "q.json"
    assert run("fixtures", "emit", "appendix-q", "--out", str(out)).returncode == 0
    assert json.loads(out.read_text()) == appendix_q().to_json()
    assert run("fixtures", "emit", "no-such-thing").returncode == 64


def test_sos_check_and_verify(tmp_path):
    poly = dump(tmp_path / "id.json", map_to_biquadratic(identity_map(2)).to_json())
    r = run("sos", "check", poly, "--seed", "0")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["status"] == "sos"
    cert = tmp_path / "id.cert.json"
    assert cert.exists()
    assert run("sos", "verify", poly, str(cert)).returncode == 0
    other = dump(tmp_path / "choi.json", choi_polynomial().to_json())
    assert main(["sos", "verify", other, str(cert)]) in (1, 64)


def test_sos_check_refutes_choi(tmp_path):
    poly = dump(tmp_path / "choi.json", choi_polynomial().to_json())
    r = run("sos", "check", poly, "--seed", "0")
    assert r.returncode == 1
    cert = tmp_path / "choi.cert.json"
    v = run("sos", "verify", poly, str(cert))
    assert v.returncode == 0
    assert json.loads(v.stdout)["proves"] == "not_sos"


def test_sos_check_requires_seed(tmp_path):
    poly = dump(tmp_path / "q.json", appendix_q().to_json())
    assert main(["sos", "check", poly]) == 64


def test_malformed_and_missing_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["sos", "check", str(bad), "--seed", "0"]) == 64
    assert main(["sos", "check", str(tmp_path / "missing.json"), "--seed", "0"]) == 74
    assert main(["no-such-command"]) == 64


def test_notsos_zeros(tmp_path):
    p = tmp_path / "p.json"
    c = tmp_path / "c.json"
    assert main(["fixtures", "emit", "appendix-p", "--out", str(p)]) == 0
    assert main(["fixtures", "emit", "zero-curve", "--out", str(c)]) == 0
    rep = tmp_path / "proof.json"
    r = run("notsos-zeros", str(p), str(c), "--out", str(rep))
    assert r.returncode == 1
    data = json.loads(rep.read_text())
    assert data["verdict"] == "not_sos"
    assert data["coefficient"] == "4"


def test_ppt(tmp_path):
    bell = dump(tmp_path / "bell.json", maximally_entangled(2).to_json())
    r = run("ppt", bell)
    assert r.returncode == 1
    assert "-0.5" in r.stdout
    mixed = dump(tmp_path / "mixed.json", maximally_mixed((2, 3)).to_json())
    assert run("ppt", mixed).returncode == 0
    assert main(["ppt", mixed, "--dims", "2x3"]) == 64


def test_choi_round_trip(tmp_path):
    mp = dump(tmp_path / "map.json", identity_map(2).to_json())
    poly = tmp_path / "poly.json"
    assert run("choi", "to-poly", mp, "--out", str(poly)).returncode == 0
    back = tmp_path / "back.json"
    assert run("choi", "from-poly", str(poly), "--out", str(back)).returncode == 0
    assert MatrixMap.from_json(json.loads(back.read_text())) == identity_map(2)


def test_repro_only_and_tampered_override(tmp_path):
    out = tmp_path / "report.json"
    r = run("repro", "--only", "appendix-q-sos", "--only", "zero-curve", "--out", str(out))
    assert r.returncode == 0, r.stdout
    rep = json.loads(out.read_text())
    assert [c["id"] for c in rep["claims"]] == ["appendix-q-sos", "zero-curve"]
    assert (tmp_path / "report.txt").exists()
    a = tmp_path / "A.json"
    assert main(["fixtures", "emit", "cert-A", "--out", str(a)]) == 0
    data = json.loads(a.read_text())
    data["entries"][0][0]["re"] = "35"
    bad = dump(tmp_path / "A_bad.json", data)
    r = run("repro", "--only", "appendix-q-sos", "--fixture-override", f"cert-A={bad}", "--out", str(out))
    assert r.returncode == 1
    assert "FAIL" in r.stdout
    assert main(["repro", "--only", "bogus", "--out", str(out)]) == 64


@pytest.mark.parametrize("args", [["--help"], ["sos", "--help"], ["repro", "--help"]])
def test_help(args):
    assert run(*args).returncode == 0
