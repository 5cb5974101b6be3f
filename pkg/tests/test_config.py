"""
Configuration loading tests.
"""

import json

from negprob.config import DEFAULT_CONFIG, load_config


class TestLoadConfig:
    """Defaults, overrides and fallbacks."""

    def test_missing_file_gives_defaults(self, tmp_path):
        assert load_config(tmp_path / "absent.json") == DEFAULT_CONFIG

    def test_nested_override(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"max_points": 32, "wigner": {"rays": 96, "grid": {"n_x": 128}}}))
        config = load_config(path)
        assert config["max_points"] == 32
        assert config["wigner"]["rays"] == 96
        assert config["wigner"]["grid"]["n_x"] == 128
        assert config["wigner"]["grid"]["n_p"] == 256
        assert config["wigner"]["directions"] == 16
        assert DEFAULT_CONFIG["wigner"]["rays"] == 64
        print("✅ Override merged key by key")

    def test_malformed_file_falls_back(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        assert load_config(path) == DEFAULT_CONFIG

    def test_environment(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"vertex_max_dim": 4}))
        monkeypatch.setenv("NEGPROB_CONFIG", str(path))
        monkeypatch.setenv("NEGPROB_LOG_LEVEL", "debug")
        config = load_config()
        assert config["vertex_max_dim"] == 4
        assert config["log_level"] == "DEBUG"
