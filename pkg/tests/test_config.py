import os

import pytest

from ktinhofer.config import Settings, _load_dotenv, get_config

VARS = (
    "KTIN_ENUM_BOUND",
    "KTIN_GROUP_CAP",
    "KTIN_TREE_NODE_CAP",
    "KTIN_SEARCH_NODE_CAP",
    "KTIN_ENGINE",
    "KTIN_PERF_SECONDS",
    "KTIN_LOG_LEVEL",
)


@pytest.fixture
def clean_env(monkeypatch):
    for var in VARS:
        monkeypatch.delenv(var, raising=False)
    return monkeypatch


def test_defaults(clean_env):
    assert get_config() == Settings()
    assert get_config().engine == "fast"


def test_overrides(clean_env):
    clean_env.setenv("KTIN_ENUM_BOUND", "80")
    clean_env.setenv("KTIN_ENGINE", "Naive")
    clean_env.setenv("KTIN_PERF_SECONDS", "7.5")
    clean_env.setenv("KTIN_LOG_LEVEL", "debug")
    settings = get_config()
    assert settings.enum_bound == 80
    assert settings.engine == "naive"
    assert settings.perf_seconds == 7.5
    assert settings.log_level == "DEBUG"


@pytest.fixture
def generous_budget(clean_env):
    clean_env.setenv("KTIN_PERF_SECONDS", "9.5")


def test_settings_fixture_follows_environment(generous_budget, settings):
    assert settings.perf_seconds == 9.5


def test_invalid_values_are_collected(clean_env):
    clean_env.setenv("KTIN_GROUP_CAP", "lots")
    clean_env.setenv("KTIN_TREE_NODE_CAP", "-3")
    clean_env.setenv("KTIN_ENGINE", "quantum")
    with pytest.raises(ValueError) as info:
        get_config()
    message = str(info.value)
    assert "KTIN_GROUP_CAP" in message
    assert "KTIN_TREE_NODE_CAP" in message
    assert "KTIN_ENGINE" in message


def test_dotenv_does_not_override_environment(tmp_path, monkeypatch):
    env = tmp_path / ".env"
    env.write_text(
        "# limits\n"
        "KTIN_DOTENV_FRESH='from file'\n"
        "KTIN_DOTENV_SET=from file\n"
        "not a pair\n",
        encoding="utf-8",
    )
    monkeypatch.setenv("KTIN_DOTENV_FRESH", "x")
    monkeypatch.delenv("KTIN_DOTENV_FRESH")
    monkeypatch.setenv("KTIN_DOTENV_SET", "from env")
    _load_dotenv(str(env))
    assert os.environ["KTIN_DOTENV_FRESH"] == "from file"
    assert os.environ["KTIN_DOTENV_SET"] == "from env"


def test_missing_dotenv_is_ignored(tmp_path):
    _load_dotenv(str(tmp_path / "absent.env"))
