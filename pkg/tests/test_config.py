import pytest

from apparent_size.config import DEFAULT_CONFIG, SEED_ENV_VAR, default_seed, load_config


def test_load_config_defaults_when_missing(tmp_path):
    assert load_config(None) == DEFAULT_CONFIG
    assert load_config(tmp_path / "absent.yaml") == DEFAULT_CONFIG


def test_load_config_deep_merges(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("montecarlo:\n  seed: 42\noptimize:\n  tol: 1.0e-8\n", encoding="utf-8")
    config = load_config(path)
    assert config["montecarlo"]["seed"] == 42
    assert config["montecarlo"]["samples"] == DEFAULT_CONFIG["montecarlo"]["samples"]
    assert config["optimize"]["tol"] == 1e-8
    assert config["output"] == DEFAULT_CONFIG["output"]


def test_default_seed_prefers_environment():
    config = {"montecarlo": {"seed": 3}}
    assert default_seed(config, environ={}) == 3
    assert default_seed(config, environ={SEED_ENV_VAR: " 17 "}) == 17
    with pytest.raises(ValueError):
        default_seed(config, environ={SEED_ENV_VAR: "seventeen"})
