import json

import pytest

from resurgia import cli


def invoke(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = invoke(capsys, *argv)
    assert code == cli.EXIT_OK, err
    return json.loads(out)


def stable(rep):
    return {k: v for k, v in rep.items() if k != "timings"}


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("RESURGIA_CACHE", raising=False)


def test_sp_example(capsys):
    rep = report(capsys, "sp", "--F", "1", "--N", "3")
    assert rep["results"]["coeffs"] == ["1", "2", "3", "4"]
    assert rep["command"]["command"] == "sp"
    assert rep["version"]


def test_reports_deterministic(capsys):
    a = report(capsys, "nir", "--F", "(1-x)/(1+x)", "--N", "8")
    b = report(capsys, "nir", "--F", "(1-x)/(1+x)", "--N", "8")
    assert stable(a) == stable(b)
    assert json.dumps(stable(a), sort_keys=True) == json.dumps(stable(b), sort_keys=True)


def test_hash_ignores_plumbing(capsys, tmp_path):
    a = report(capsys, "sp", "--F", "1-x", "--N", "4")
    b = report(capsys, "sp", "--F", "1-x", "--N", "4", "--cache", str(tmp_path))
    assert a["inputs_hash"] == b["inputs_hash"]
    c = report(capsys, "sp", "--F", "1-x", "--N", "5")
    assert c["inputs_hash"] != a["inputs_hash"]


def test_cache_round_trip_and_corruption(capsys, tmp_path):
    args = ("sp", "--F", "(1-x)/(1+x)", "--N", "30", "--cache", str(tmp_path))
    fresh = report(capsys, *args)
    assert fresh["timings"]["cache"]["sp"] == "miss"
    hit = report(capsys, *args)
    assert hit["timings"]["cache"]["sp"] == "hit"
    assert hit["results"] == fresh["results"]
    (entry,) = tmp_path.glob("*.json")
    blob = json.loads(entry.read_text())
    blob["payload"]["coeffs"][7] = "12345"
    entry.write_text(json.dumps(blob))
    again = report(capsys, *args)
    assert again["timings"]["cache"]["sp"] == "corrupt-recomputed"
    assert again["results"] == fresh["results"]


def test_cache_env_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RESURGIA_CACHE", str(tmp_path))
    report(capsys, "sp", "--F", "1-x", "--N", "10")
    assert list(tmp_path.glob("*.json"))


def test_nir_cache_hit(capsys, tmp_path):
    args = ("nir", "--f", "x**2", "--beta", "trivial", "--N", "10", "--cache", str(tmp_path))
    a = report(capsys, *args)
    b = report(capsys, *args)
    assert b["timings"]["cache"]["nir"] == "hit"
    assert a["results"] == b["results"]


def test_config_file_and_out(capsys, tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"command": "sp", "F": "1", "N": 2}))
    out = tmp_path / "rep.json"
    code, stdout, _ = invoke(capsys, "sp", "--config", str(cfg), "--out", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["results"]["coeffs"] == ["1", "2", "3"]


def test_monodromy_example(capsys):
    rep = report(capsys, "monodromy", "--p", "3", "--turns", "1", "--golden")
    res = rep["results"]
    assert res["unipotent_steps"]
    # t^3 + 15t^2 + 12t - 1 appears in the list (the composite itself is unipotent)
    assert [-1, 12, 15, 1] in res["charpolys"]
    assert res["charpolys"][-1] == [-1, 3, -3, 1]
    assert res["golden"]["mismatches"] == []


def test_refdata(capsys):
    rep = report(capsys, "refdata", "--check")
    assert rep["results"]["check"]["passed"] and rep["results"]["check"]["roundtrip_identical"]
    rep = report(capsys, "refdata", "--family", "T", "--index", "8", "--eval", "beta=1/2")
    assert rep["results"]["entry"]["value"] == "-67/184320"


def test_ode_find_and_scan(capsys):
    rep = report(capsys, "ode-find", "--F", "1-x", "--N", "40", "--part", "singular", "--d", "1", "--delta", "1")
    assert "operators" in rep["results"]
    a = report(capsys, "ode-scan", "--F", "1-x", "--N", "40", "--d-max", "2", "--delta-max", "2")
    b = report(capsys, "ode-scan", "--F", "1-x", "--N", "40", "--d-max", "2", "--delta-max", "2", "--threads", "2")
    assert a["results"] == b["results"]


def test_covariant(capsys):
    rep = report(capsys, "covariant", "--pi", "4")
    assert rep["results"]


def test_singscan_config(capsys, tmp_path):
    cs = ["1"]
    for n in range(1, 201):
        a, b = cs[-1].split("/") if "/" in cs[-1] else (cs[-1], "1")
        from fractions import Fraction
        cs.append(str(Fraction(int(a), int(b)) * Fraction(2 * n - 1, 2 * n)))
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"command": "singscan", "coeffs": cs}))
    res = report(capsys, "singscan", "--config", str(cfg))["results"]
    assert abs(res["location"][0] - 1) < 1e-6 and abs(res["exponent"] + 0.5) < 1e-3


def test_emit_subset(capsys):
    rep = report(capsys, "sp", "--F", "1", "--N", "2", "--emit", "coeffs")
    assert list(rep["results"]) == ["coeffs"]
    code, _, _ = invoke(capsys, "sp", "--F", "1", "--N", "2", "--emit", "nope")
    assert code == cli.EXIT_VALIDATION


def test_validation_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"command": "sp", "F": "1", "N": 2, "colour": "red"}))
    assert invoke(capsys, "sp", "--config", str(cfg))[0] == cli.EXIT_VALIDATION
    cfg.write_text(json.dumps({"command": "sp", "F": "1", "f": "x", "N": 2}))
    assert invoke(capsys, "sp", "--config", str(cfg))[0] == cli.EXIT_VALIDATION
    with pytest.raises(SystemExit) as exc:
        cli.main(["sp", "--F", "1", "--f", "x", "--N", "2"])
    assert exc.value.code == cli.EXIT_VALIDATION
    assert invoke(capsys, "sp", "--F", "1", "--N", "-1")[0] == cli.EXIT_VALIDATION
    assert invoke(capsys, "refdata", "--family", "T", "--index", "7")[0] == cli.EXIT_VALIDATION
    assert invoke(capsys, "monodromy", "--p", "12")[0] == cli.EXIT_VALIDATION


def test_computation_error(capsys):
    code, _, err = invoke(capsys, "sp", "--F", "1/(2-3*x)", "--N", "3")
    assert code == cli.EXIT_COMPUTE and "PoleOnGrid" in err


def test_inconclusive(capsys, tmp_path):
    cfg = tmp_path / "s.json"
    cfg.write_text(json.dumps({"command": "singscan", "coeffs": [str(1 - n % 2) for n in range(100)]}))
    assert invoke(capsys, "singscan", "--config", str(cfg))[0] == cli.EXIT_INCONCLUSIVE
