import pytest

from greedybases import paths, settings

SETTINGS_ENV = [settings.ENV_PREFIX + name.upper() for name in settings.Settings.model_fields]


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """Keep run history and config.json inside tmp_path, with default settings."""
    monkeypatch.setenv(paths.DATA_DIR_ENV, str(tmp_path / "data"))
    monkeypatch.setenv(paths.CONFIG_ENV, str(tmp_path / "config.json"))
    for name in SETTINGS_ENV:
        monkeypatch.delenv(name, raising=False)
    paths.reset_config_cache()
    settings.reset_settings_cache()
    yield tmp_path
    paths.reset_config_cache()
    settings.reset_settings_cache()
