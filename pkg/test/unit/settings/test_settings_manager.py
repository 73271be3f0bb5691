import pytest

from src.application.services.settings_manager import SettingsManager


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in SettingsManager.KEYS:
        monkeypatch.delenv(key, raising=False)


def _settings_file(tmp_path, body):
    path = tmp_path / "settings.env"
    path.write_text(body, encoding="utf-8")
    return str(path)


def test_file_values_are_loaded(tmp_path):
    path = _settings_file(tmp_path, "# comment\nISAC_AIRSPACE_SEED = 42\n\nISAC_AIRSPACE_JOBS=3\nnot a setting\n")

    settings = SettingsManager(path)

    assert settings.seed() == 42
    assert settings.jobs() == 3


def test_environment_beats_file(tmp_path, monkeypatch):
    path = _settings_file(tmp_path, "ISAC_AIRSPACE_SEED=42\n")
    monkeypatch.setenv("ISAC_AIRSPACE_SEED", "9")

    assert SettingsManager(path).seed() == 9


def test_missing_file_and_env_give_none(tmp_path):
    settings = SettingsManager(str(tmp_path / "absent.env"))

    assert settings.seed() is None
    assert settings.jobs() is None
    assert settings.resolve_seed(None) is None


def test_cli_seed_wins(tmp_path, monkeypatch):
    monkeypatch.setenv("ISAC_AIRSPACE_SEED", "9")
    settings = SettingsManager(str(tmp_path / "absent.env"))

    assert settings.resolve_seed(5) == 5
    assert settings.resolve_seed(None) == 9


def test_non_integer_values_are_ignored(tmp_path, monkeypatch):
    monkeypatch.setenv("ISAC_AIRSPACE_JOBS", "many")

    assert SettingsManager(str(tmp_path / "absent.env")).jobs() is None


def test_log_level_is_normalised(tmp_path):
    settings = SettingsManager(_settings_file(tmp_path, "ISAC_AIRSPACE_LOG_LEVEL= debug\n"))

    assert settings.log_level() == "DEBUG"


def test_unknown_log_level_is_ignored(tmp_path, monkeypatch):
    monkeypatch.setenv("ISAC_AIRSPACE_LOG_LEVEL", "LOUD")

    assert SettingsManager(str(tmp_path / "missing.env")).log_level() is None
