"""CLI exit semantics, output formats, config handling, determinism."""

import json
import subprocess
import sys

import pytest

BASE = [sys.executable, "-m", "qc7"]


def run(args, env_extra=None, timeout=600):
    import os
    env = dict(os.environ)
    env.update(env_extra or {})
    return subprocess.run(BASE + args, capture_output=True, text=True,
                          env=env, timeout=timeout)


@pytest.fixture(scope="module")
def validate_doc():
    r = run(["validate", "--points", "3"])
    assert r.returncode == 0, r.stderr
    return json.loads(r.stdout)


def test_validate_exit_zero_and_structure(validate_doc):
    doc = validate_doc
    assert doc["must_pass_failures"] == []
    names = {e["name"] for e in doc["suites"]["models"]["sphere7"]}
    assert "reeb-duality" in names
    assert "contact-compatibility" in names
    assert "torsion-prescribed" in names
    assert "convention_ledger" in doc["suites"]["models"]


def test_validate_single_point_still_passes():
    r = run(["validate", "--points", "1"])
    assert r.returncode == 0


def test_validate_corrupted_convention_fails():
    r = run(["validate", "--points", "1"],
            env_extra={"QC7_CORRUPT_CONVENTION": "1"})
    assert r.returncode == 1
    doc = json.loads(r.stdout)
    assert any("contact-compatibility" in f for f in doc["must_pass_failures"])


def test_config_error_exit_two(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"sample_points": 0}')
    r = run(["validate", "--config", str(cfg)])
    assert r.returncode == 2
    cfg.write_text('{"unknown_key": 1}')
    r = run(["validate", "--config", str(cfg)])
    assert r.returncode == 2


def test_usage_error_exit_two():
    r = run(["no-such-command"])
    assert r.returncode == 2


def test_spectrum_csv_contract():
    r = run(["spectrum", "--degree", "1", "--format", "csv"])
    assert r.returncode == 0
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "lambda,multiplicity,certified,residual"
    assert lines[1].startswith("4,8,True")


def test_spectrum_json_degree2():
    r = run(["spectrum", "--degree", "2"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["pass"]
    assert doc["spectral"]["lambda1"] == "4"
    assert doc["spectral"]["mu1"] == "7"


def test_lichnerowicz_json():
    r = run(["lichnerowicz", "--degree", "1"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc == {"k0": "12", "bound": "4", "lambda1": "4", "sharp": True}


def test_pform_subcommand():
    r = run(["pform", "--function", "x1^2*x2 - 3*x5/4"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["consistency_residual"] == "0"
    assert doc["b0_identically_zero"] is True
    r = run(["pform", "--function", "x9"])
    assert r.returncode == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"seed": 3, "sample_points": 2, "spectral_degree": 1}')
    r = run(["spectrum", "--config", str(cfg), "--format", "csv"])
    assert r.returncode == 0
    assert r.stdout.splitlines()[1].startswith("4,8")


def test_out_flag(tmp_path):
    out = tmp_path / "lich.json"
    r = run(["lichnerowicz", "--degree", "1", "--out", str(out)])
    assert r.returncode == 0
    assert json.loads(out.read_text())["sharp"] is True
