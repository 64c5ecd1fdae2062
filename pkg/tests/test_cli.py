import json

import pytest

from modcohft.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = main(list(argv) + ["--out", str(out)])
    return code, json.loads(out.read_text())


def export(tmp_path, what, name, *extra):
    path = tmp_path / name
    assert main(["export", what, "--out", str(path)] + list(extra)) == 0
    return str(path)


def test_export_and_verify_tqft(tmp_path):
    f = export(tmp_path, "tqft-z2", "z2.json", "--window", "4")
    el = json.loads(open(f).read())
    assert el["type"] == "ga" and el["space"] and el["terms"]
    code, cert = run(tmp_path, "verify-me", f, "--window", "4")
    assert code == 0 and cert["verdict"] == "pass" and cert["kind"] == "TQFT"


def test_verify_me_zero_element(tmp_path):
    f = tmp_path / "zero.json"
    f.write_text(json.dumps({"type": "ga", "space": {"parity": [0], "pairing": [["1"]]},
                             "terms": []}))
    code, cert = run(tmp_path, "verify-me", str(f))
    assert code == 0 and cert["residual_support"] == []


def test_verify_me_broken_element_fails(tmp_path):
    f = export(tmp_path, "tqft-rank1", "t.json", "--window", "3")
    el = json.loads(open(f).read())
    el["terms"][0]["coef"] = "7"
    (tmp_path / "bad.json").write_text(json.dumps(el))
    code, cert = run(tmp_path, "verify-me", str(tmp_path / "bad.json"), "--window", "3")
    assert code == 1 and cert["verdict"] == "fail" and cert["residual_support"]


def test_verify_pz(tmp_path):
    code, cert = run(tmp_path, "verify-pz", "--m", "1", "--window", "4")
    assert code == 0
    code, cert = run(tmp_path, "verify-pz", "--m", "1", "--window", "4", "--minimal", "2", "1")
    assert code == 0 and cert["minimal"]


def test_homology_interior_tadpole(tmp_path):
    csv = tmp_path / "h.csv"
    code, cert = run(tmp_path, "homology", "--flavor", "cgra-omega",
                     "--window", "interior-tadpole", "--csv", str(csv))
    assert code == 0 and cert["classes"] == 1
    lines = csv.read_text().splitlines()
    assert lines[0] == "grading,dim,status" and len(lines) == len(cert["table"]) + 1


def test_lift_sigma3(tmp_path):
    f = export(tmp_path, "sigma3", "s.json")
    code, cert = run(tmp_path, "lift", f)
    assert code == 0 and cert["residual_support"] == []
    assert all(t["hbar"] == 0 for t in cert["lift"]["terms"])


def test_br_via_ggrt(tmp_path):
    f = export(tmp_path, "tqft-rank1", "t.json", "--window", "3")
    code, cert = run(tmp_path, "br", f, "--via-ggrt", "--window", "3", "--hbar", "2")
    assert code == 0 and cert["matches_br"] is True


def test_act_givental_r(tmp_path):
    r = export(tmp_path, "givental-r", "r.json")
    t = export(tmp_path, "tqft-rank1", "t.json", "--window", "3")
    code, cert = run(tmp_path, "act", r, t, "--window", "3")
    assert code == 0 and cert["cycle_check"]["verdict"] == "pass"


def test_missing_file_is_a_structured_error(tmp_path):
    code, cert = run(tmp_path, "verify-me", str(tmp_path / "nope.json"))
    assert code == 2 and cert["verdict"] == "error" and "nope.json" in cert["message"]


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["homology", "--flavor", "cgra-omega", "--max-vertices", "3", "--out", str(a)])
    main(["homology", "--flavor", "cgra-omega", "--max-vertices", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_enumerate(tmp_path):
    code, cert = run(tmp_path, "enumerate", "1", "1")
    assert code == 0 and cert["count"] == 2
