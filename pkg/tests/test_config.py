"""
Tests for run configuration loading.
"""
from fractions import Fraction

import pytest

from haarbmo.config import RunConfig, build_config, load_file_settings
from haarbmo.exceptions import FormatError, ParameterError


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = build_config({})
    assert config == RunConfig()
    assert config.output_format == "json"
    assert config.budget == 4


def test_default_file_is_read(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "haarbmo.toml").write_text('[run]\ndepth = 3\nA = 2.5\nK = 4\nformat = "table"\n')
    settings = load_file_settings()
    assert settings == {"depth": 3, "threshold": Fraction(5, 2), "grid": 4, "output_format": "table"}


def test_flags_override_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "haarbmo.toml").write_text("[run]\ndepth = 3\nseed = 11\n")
    config = build_config({"depth": 2, "seed": None, "command": "bmo"})
    assert config.depth == 2
    assert config.seed == 11
    assert config.command == "bmo"


def test_explicit_path(tmp_path):
    path = tmp_path / "custom.toml"
    path.write_text('[run]\nA = "3/2"\n')
    assert build_config({}, str(path)).threshold == Fraction(3, 2)


def test_missing_explicit_path(tmp_path):
    with pytest.raises(OSError):
        load_file_settings(str(tmp_path / "absent.toml"))


def test_unknown_key_is_ignored(tmp_path, caplog):
    path = tmp_path / "haarbmo.toml"
    path.write_text("[run]\ndepth = 2\ncolour = true\n")
    settings = load_file_settings(str(path))
    assert settings == {"depth": 2}
    assert "unknown configuration key 'colour'" in caplog.text


def test_malformed_file(tmp_path):
    path = tmp_path / "haarbmo.toml"
    path.write_text("[run]\ndepth = = 2\n")
    with pytest.raises(FormatError) as excinfo:
        load_file_settings(str(path))
    assert excinfo.value.line is not None
    assert "malformed configuration file" in str(excinfo.value)


@pytest.mark.parametrize("contents, message", [
    ('[run]\nA = "two"\n', "A in .* must be a number"),
    ("[run]\nA = false\n", "A in .* must be a number"),
    ("run = 3\n", "must be a table"),
])
def test_malformed_values(tmp_path, contents, message):
    path = tmp_path / "haarbmo.toml"
    path.write_text(contents)
    with pytest.raises(FormatError, match=message):
        load_file_settings(str(path))


@pytest.mark.parametrize("overrides", [
    {"depth": "2"},
    {"seed": 1.5},
    {"output_format": "yaml"},
    {"depth": -1},
    {"grid": 0},
    {"budget": 0},
])
def test_invalid_values(overrides):
    with pytest.raises(ParameterError):
        RunConfig().merged(overrides).validate()
