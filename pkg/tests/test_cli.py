"""Command-line driver: configs, artifact layout, exit codes, determinism."""

import hashlib
import json
import os

import numpy as np
import pytest

from heisenfan import cli


def _run(args):
    return cli.main(args)


def _fast_flags(out, extra=()):
    # k_max can be cut (the Gaussian's Laguerre tail decays fast), but the
    # lambda quadrature must stay fine enough for the Plancherel-grade suites
    return ["--output-dir", str(out), "--fan-k-max", "16"] + list(extra)


def test_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        _run(["no-such-suite"])


def test_config_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"grid": {"L": -3.0, "N": 64}}))
    code = _run(["plancherel", "--config", str(cfg),
                 "--output-dir", str(tmp_path / "out")])
    assert code == 2


def test_plancherel_suite_passes(tmp_path, capsys):
    out = tmp_path / "out"
    code = _run(["plancherel"] + _fast_flags(out))
    assert code == 0
    line = capsys.readouterr().out
    assert "[pass] plancherel" in line
    verdict = json.loads((out / "plancherel" / "verdict.json").read_text())
    assert verdict["pass"] and verdict["test"] == "plancherel_identity"
    manifest = json.loads((out / "plancherel" / "manifest.json").read_text())
    assert manifest["pass"]
    assert "verdict.json" in manifest["checksums"]


def test_manifest_checksums_are_valid(tmp_path):
    out = tmp_path / "out"
    assert _run(["limit-continuity"] + _fast_flags(out)) == 0
    d = out / "limit-continuity"
    manifest = json.loads((d / "manifest.json").read_text())
    for name, digest in manifest["checksums"].items():
        body = (d / name).read_bytes()
        assert hashlib.sha256(body).hexdigest() == digest, name


def test_transform_suite_writes_coefficients(tmp_path):
    out = tmp_path / "out"
    assert _run(["transform"] + _fast_flags(out)) == 0
    d = out / "transform"
    assert (d / "slice_norms.csv").exists()
    assert (d / "coefficients" / "fan.json").exists()
    assert (d / "coefficients" / "manifest.json").exists()


def test_invert_suite(tmp_path):
    out = tmp_path / "out"
    assert _run(["invert"] + _fast_flags(out)) == 0
    rows = (out / "invert" / "roundtrip.csv").read_text().strip().splitlines()
    assert rows[0] == "x,y,t,re,im,ref_re,abs_err"
    assert len(rows) == 1 + 75


def test_heat_suite(tmp_path):
    out = tmp_path / "out"
    assert _run(["heat", "--test-function", "heat_kernel", "--b", "0.25"]
                + _fast_flags(out)) == 0
    docs = [json.loads((out / "heat" / n).read_text())
            for n in ("verdict_roundtrip.json", "verdict_semigroup.json")]
    assert all(d["pass"] for d in docs)


def test_hecke_suite_with_explicit_case(tmp_path):
    out = tmp_path / "out"
    assert _run(["hecke", "--p", "1", "--q", "0", "--k", "2",
                 "--lambda", "1.0"] + _fast_flags(out)) == 0
    rows = (out / "hecke" / "hecke_residuals.csv").read_text().strip().splitlines()
    assert len(rows) == 2  # header + the one requested case


def test_gelfand_suite_requires_radial_function(tmp_path):
    out = tmp_path / "out"
    code = _run(["gelfand", "--test-function", "harmonic_times_radial"]
                + _fast_flags(out))
    assert code == 2


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("HEISENFAN_OUTPUT", str(tmp_path / "envout"))
    assert _run(["limit-continuity", "--fan-k-max", "4",
                 "--fan-nodes-per-sign", "4"]) == 0
    assert (tmp_path / "envout" / "limit-continuity" / "manifest.json").exists()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "grid": {"L": 8.0, "N": 64},
        "fan": {"k_max": 4, "nodes_per_sign": 4},
        "test_function": {"kind": "gaussian", "sigma_z": 1.0},
    }))
    out = tmp_path / "out"
    assert _run(["limit-continuity", "--config", str(cfg),
                 "--output-dir", str(out), "--fan-k-max", "6"]) == 0
    manifest = json.loads((out / "limit-continuity" / "manifest.json").read_text())
    assert manifest["config"]["fan"]["k_max"] == 6  # flag wins over file


def test_transform_deterministic_across_threads(tmp_path):
    digests = []
    for threads in (1, 4):  # clamped to the available cores; still must agree
        out = tmp_path / f"t{threads}"
        code = _run(["transform", "--test-function", "harmonic_times_radial",
                     "--threads", str(threads), "--fan-k-max", "3",
                     "--fan-nodes-per-sign", "2", "--output-dir", str(out)])
        assert code == 0
        d = out / "transform" / "coefficients"
        blob = b"".join(sorted(
            p.read_bytes() for p in d.glob("*.csv")))
        digests.append(hashlib.sha256(blob).hexdigest())
    assert digests[0] == digests[1]
