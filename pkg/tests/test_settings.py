import argparse

import pytest

from app_components.settings import (
    DEFAULT_SEED,
    SEED_VARIABLE,
    SuiteConfig,
    build_config,
    parse_seed,
    resolve_seed,
)
from utils.errors import ConfigError


def test_seed_formats():
    assert parse_seed("0xC0FFEE") == 0xC0FFEE
    assert parse_seed("42") == 42
    with pytest.raises(ConfigError):
        parse_seed("forty-two")


def test_seed_precedence(monkeypatch):
    monkeypatch.setenv(SEED_VARIABLE, "7")
    assert resolve_seed("3") == 3
    assert resolve_seed(None) == 7
    monkeypatch.delenv(SEED_VARIABLE)
    assert resolve_seed(None) == DEFAULT_SEED


@pytest.mark.parametrize(
    "kwargs",
    [
        {"count": 0},
        {"max_dim": 1},
        {"max_dim": 9},
        {"tolerance": 0.0},
        {"epsilon": -1.0},
        {"fmt": "xml"},
        {"seed": -1},
        {"profile": "nightly"},
    ],
)
def test_invalid_settings(kwargs):
    with pytest.raises(ConfigError):
        SuiteConfig(**kwargs)


def test_config_from_the_command_line(monkeypatch):
    monkeypatch.delenv(SEED_VARIABLE, raising=False)
    args = argparse.Namespace(seed="0x10", tol=None, epsilon=1e-5, count=3, dims=None, out=None, format="csv")
    cfg = build_config(args)
    assert cfg.seed == 16
    assert cfg.epsilon == 1e-5 and cfg.count == 3
    assert cfg.max_dim == 4 and cfg.fmt == "csv"


def test_missing_flags_fall_back_to_defaults(monkeypatch):
    monkeypatch.delenv(SEED_VARIABLE, raising=False)
    cfg = build_config(argparse.Namespace())
    assert cfg == SuiteConfig()


def test_acceptance_profile_sizes_the_run(monkeypatch):
    monkeypatch.delenv(SEED_VARIABLE, raising=False)
    cfg = build_config(argparse.Namespace(profile="acceptance"))
    assert cfg.count == 500 and cfg.max_dim == 8
    assert cfg.extension_size == 6
    assert SuiteConfig().extension_size == 4


def test_explicit_flags_override_the_profile(monkeypatch):
    monkeypatch.delenv(SEED_VARIABLE, raising=False)
    cfg = build_config(argparse.Namespace(profile="acceptance", count=10, dims=3))
    assert cfg.count == 10 and cfg.max_dim == 3
    assert cfg.profile == "acceptance"


def test_unknown_profile_on_the_command_line():
    with pytest.raises(ConfigError):
        build_config(argparse.Namespace(profile="nightly"))
