import json

import pytest
from loguru import logger

from crossed_kuperberg import paths


@pytest.fixture
def warnings_log():
    messages = []
    handler = logger.add(lambda m: messages.append(m.record["message"]), level="WARNING")
    yield messages
    logger.remove(handler)


@pytest.fixture
def settings_file(tmp_path):
    return tmp_path / "settings.json"


def test_defaults(settings_file):
    assert paths.load_settings(path=settings_file) == paths.Settings(budget=1_000_000, strategy="greedy")


def test_resolution_order(settings_file, monkeypatch):
    settings_file.write_text(json.dumps({"budget": 10, "strategy": "naive"}))
    assert paths.load_settings(path=settings_file) == paths.Settings(budget=10, strategy="naive")

    monkeypatch.setenv(paths.BUDGET_ENV, "20")
    assert paths.load_settings(path=settings_file).budget == 20

    s = paths.load_settings(budget=30, strategy="greedy", path=settings_file)
    assert s == paths.Settings(budget=30, strategy="greedy")


def test_unknown_keys_ignored(settings_file):
    settings_file.write_text(json.dumps({"budget": 5, "theme": "dark"}))
    assert paths.load_settings(path=settings_file).budget == 5


@pytest.mark.parametrize("text", ["{oops", "[1, 2]"])
def test_unreadable_file_warns(text, settings_file, warnings_log):
    settings_file.write_text(text)
    assert paths.load_settings(path=settings_file) == paths.Settings()
    assert any("ignoring" in m for m in warnings_log)


def test_invalid_values_fall_back(settings_file, monkeypatch, warnings_log):
    monkeypatch.setenv(paths.STRATEGY_ENV, "random")
    assert paths.load_settings(path=settings_file) == paths.Settings()
    assert any("invalid settings" in m for m in warnings_log)


def test_save_and_load(tmp_path):
    target = tmp_path / "nested" / "settings.json"
    written = paths.save_settings(paths.Settings(budget=7, strategy="naive"), target)
    assert written == target
    assert not target.with_name("settings.json.tmp").exists()
    assert paths.load_settings(path=target) == paths.Settings(budget=7, strategy="naive")


@pytest.mark.parametrize("value", ["-3", "0"])
def test_budget_must_be_positive(value, settings_file, monkeypatch, warnings_log):
    monkeypatch.setenv(paths.BUDGET_ENV, value)
    assert paths.load_settings(path=settings_file).budget == paths.DEFAULT_BUDGET
    assert any("invalid settings" in m for m in warnings_log)
    assert paths.load_settings(budget=5, path=settings_file).budget == 5


def test_nonpositive_budget_in_file_is_ignored(settings_file, warnings_log):
    settings_file.write_text(json.dumps({"budget": -1, "strategy": "naive"}))
    assert paths.load_settings(path=settings_file) == paths.Settings()
    assert any("invalid settings" in m for m in warnings_log)
