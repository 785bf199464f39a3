"""Tests for configuration loading and run settings"""

import json

import pytest
from pydantic import ValidationError

from src.core.config import THREADS_ENV, AppConfig, ConfigManager, RunConfig
from src.utils.exceptions import ConfigurationException


def test_defaults_when_file_missing(tmp_path):
    config = ConfigManager(str(tmp_path / "missing.json")).get_config()
    assert config.window.max_word == 3
    assert config.window.max_level == 4
    assert config.verify.suite == "all"
    assert config.threads == 1


def test_save_and_reload(tmp_path):
    path = str(tmp_path / "config.json")
    manager = ConfigManager(path)
    manager.config.window.max_word = 2
    manager.update_config(log_level="DEBUG")
    manager.save_config()
    reloaded = ConfigManager(path).get_config()
    assert reloaded.window.max_word == 2
    assert reloaded.log_level == "DEBUG"


def test_partial_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"verify": {"seed": 11}, "threads": 3}))
    config = ConfigManager(str(path)).get_config()
    assert config.verify.seed == 11
    assert config.verify.max_n == 6
    assert config.threads == 3


@pytest.mark.parametrize("content", ["{not json", json.dumps({"window": {"width": 3}})])
def test_bad_file(tmp_path, content):
    path = tmp_path / "config.json"
    path.write_text(content)
    with pytest.raises(ConfigurationException):
        ConfigManager(str(path))


def test_unknown_key(tmp_path):
    manager = ConfigManager(str(tmp_path / "config.json"))
    with pytest.raises(ConfigurationException):
        manager.update_config(colour="red")


def test_run_config_overrides(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    run = RunConfig.from_app_config(AppConfig(), max_word=2, catalog="sl2", seed=None)
    assert run.max_word == 2
    assert run.max_level == 4
    assert run.catalog == "sl2"
    assert run.seed == 7


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "4")
    assert RunConfig.from_app_config(AppConfig()).threads == 4
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigurationException, match=THREADS_ENV):
        RunConfig.from_app_config(AppConfig())


@pytest.mark.parametrize("overrides", [{"max_word": 0}, {"suite": "everything"}, {"max_level": -1}])
def test_invalid_run_config(monkeypatch, overrides):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    with pytest.raises(ConfigurationException):
        RunConfig.from_app_config(AppConfig(), **overrides)


def test_run_config_forbids_unknown_fields():
    with pytest.raises(ValidationError):
        RunConfig(width=3)
