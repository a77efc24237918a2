import json
import os
from pathlib import Path

import platformdirs

APP_NAME = "greedy-bases"
CONFIG_DIR = Path.home() / f".{APP_NAME}"
CONFIG_ENV = "GREEDYBASES_CONFIG"
DATA_DIR_ENV = "GREEDYBASES_DATA_DIR"
_CONFIG_CACHE = None


def get_config_path() -> Path:
    env_path = os.environ.get(CONFIG_ENV)
    if env_path:
        return Path(env_path).expanduser().resolve()
    return CONFIG_DIR / "config.json"


def load_config() -> dict:
    global _CONFIG_CACHE
    if _CONFIG_CACHE is not None:
        return _CONFIG_CACHE
    config_path = get_config_path()
    if config_path.exists():
        try:
            loaded = json.loads(config_path.read_text())
            _CONFIG_CACHE = loaded if isinstance(loaded, dict) else {}
        except Exception:
            _CONFIG_CACHE = {}
    else:
        _CONFIG_CACHE = {}
    return _CONFIG_CACHE


def reset_config_cache():
    global _CONFIG_CACHE
    _CONFIG_CACHE = None


def save_config(config: dict) -> Path:
    """Write config.json and refresh the cache."""
    global _CONFIG_CACHE
    config_path = get_config_path()
    config_path.parent.mkdir(parents=True, exist_ok=True)
    config_path.write_text(json.dumps(config, indent=2, sort_keys=True))
    _CONFIG_CACHE = dict(config)
    return config_path


def get_data_dir() -> Path:
    """
    Returns the directory holding run history.
    Order: GREEDYBASES_DATA_DIR env -> "data_dir" in config.json -> platformdirs.user_data_dir.
    """
    env_path = os.environ.get(DATA_DIR_ENV)
    if env_path:
        path = Path(env_path).expanduser().resolve()
    else:
        cfg_path = load_config().get("data_dir")
        if cfg_path:
            path = Path(cfg_path).expanduser().resolve()
        else:
            path = Path(platformdirs.user_data_dir(appname=APP_NAME, appauthor=False))

    path.mkdir(parents=True, exist_ok=True)
    return path


def get_db_path() -> Path:
    """Returns the path to the SQLite run-history database."""
    return get_data_dir() / "greedybases.db"
