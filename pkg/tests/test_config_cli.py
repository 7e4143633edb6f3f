"""Configuration loading/validation and the experiment runner."""

import json
from pathlib import Path

import pytest

from msalab.cli import main
from msalab.config import (
    ConfigError,
    ExperimentConfig,
    ModelConfig,
    RunManifest,
    config_from_dict,
    config_hash,
    load_config,
)


def test_defaults_valid():
    cfg = ExperimentConfig()
    assert cfg.schedule_scales() == (8, 22)


def test_round_trip_lossless():
    cfg = ExperimentConfig(
        model=ModelConfig(n=2, N=2, g=3.0), trials=7, seed=42
    )
    again = config_from_dict(cfg.to_dict())
    assert again == cfg
    assert config_hash(again) == config_hash(cfg)


def test_unknown_field_rejected():
    with pytest.raises(ConfigError):
        config_from_dict({"model": {"flux": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"turbo": True})


def test_fixed_exponents_not_configurable():
    with pytest.raises(ConfigError):
        config_from_dict({"msa": {"alpha": 2.0}})
    with pytest.raises(ConfigError):
        config_from_dict({"scales": {"beta": 0.3}})


def test_cap_checked_at_load():
    with pytest.raises(ConfigError):
        config_from_dict({"model": {"n": 2, "N": 2}, "scales": {"L0": 40, "k_max": 0}})


def test_particle_count_validated():
    with pytest.raises(ConfigError):
        ModelConfig(n=3, N=2)


def test_load_config_yaml(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text("model:\n  g: 4.0\nscales:\n  L0: 6\ntrials: 3\n")
    cfg = load_config(path)
    assert cfg.model.g == 4.0
    assert cfg.scales.L0 == 6


def test_load_config_rejects_non_mapping(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_manifest_records_hashes(tmp_path):
    cfg = ExperimentConfig(trials=5, seed=3)
    manifest = RunManifest.create(cfg, {"hash": "abc"}, ["a.csv"])
    path = manifest.write(tmp_path)
    data = json.loads(path.read_text())
    assert data["config_hash"] == config_hash(cfg)
    assert data["calibration_hash"] == "abc"
    assert (data["seed_start"], data["seed_end"]) == (3, 7)
    assert (data["alpha"], data["beta"]) == (1.5, 0.5)


# ---------------------------------------------------------------------------
# CLI subcommands


def read_tree(run_dir: Path) -> dict:
    out = {}
    for p in sorted(run_dir.iterdir()):
        out[p.name] = p.read_bytes()
    return out


def test_cli_classify_writes_run_dir(tmp_path, calibration):
    rc = main(["classify", "--out-dir", str(tmp_path / "run"), "--seed", "4"])
    assert rc == 0
    tree = read_tree(tmp_path / "run")
    assert {"classification.json", "manifest.json", "schema.json"} <= set(tree)
    payload = json.loads(tree["classification.json"])
    assert payload["seed"] == 4
    assert payload["cnr_family"]


def test_cli_ds_rerun_is_byte_identical(tmp_path, calibration, monkeypatch):
    monkeypatch.chdir(tmp_path)
    args = ["ds", "--trials", "2", "--seed", "0"]
    assert main(args + ["--out-dir", "r1"]) == 0
    assert main(args + ["--out-dir", "r2"]) == 0
    t1, t2 = read_tree(Path("r1")), read_tree(Path("r2"))
    assert t1["ds.csv"] == t2["ds.csv"]
    assert t1["schema.json"] == t2["schema.json"]
    m1 = json.loads(t1["manifest.json"])
    m2 = json.loads(t2["manifest.json"])
    m1.pop("timestamp"), m2.pop("timestamp")
    assert m1 == m2


def test_cli_oracle_passes(tmp_path):
    rc = main(["oracle", "--out-dir", str(tmp_path / "run"), "--seed", "0"])
    assert rc == 0
    payload = json.loads((tmp_path / "run" / "oracle.json").read_text())
    assert payload["ok"]


def test_cli_rejects_bad_config(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("msa:\n  alpha: 2.0\n")
    rc = main(["ds", "--config", str(bad), "--out-dir", str(tmp_path / "run")])
    assert rc == 2
