"""Runtime settings: defaults, optional JSON settings file, env overrides.

Precedence, lowest first: built-in defaults, the JSON file named by
``MONODROMY_SETTINGS``, individual ``MONODROMY_*`` environment variables.
CLI flags are applied on top by ``monodromy.py``.
"""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

_log = logging.getLogger("monodromy.config")

SETTINGS_ENV = "MONODROMY_SETTINGS"

# env var -> Settings field
_ENV_OVERRIDES = {
    "MONODROMY_MAX_DIM": "max_dim",
    "MONODROMY_CLOSURE_CAP": "closure_cap",
    "MONODROMY_WORD_BOUND": "word_bound",
    "MONODROMY_DEGREE_CAP": "degree_cap",
    "MONODROMY_SEED": "seed",
    "MONODROMY_LOG_LEVEL": "log_level",
}

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


@dataclass(frozen=True)
class Settings:
    max_dim: int = 24
    closure_cap: int = 20000
    word_bound: int = 8
    degree_cap: int = 100
    seed: int = 0
    log_level: str = "WARNING"

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Return a copy with every non-None override applied."""
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **clean) if clean else self


def _coerce(name: str, raw: Any) -> Any:
    """Convert a raw settings value to the field's type; ValueError if it can't."""
    if name == "log_level":
        level = str(raw or "").strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level: {raw!r}")
        return level
    if isinstance(raw, bool):
        raise ValueError(f"{name} must be an integer")
    value = int(str(raw).strip())
    if name == "seed":
        return value
    if value < 1:
        raise ValueError(f"{name} must be positive")
    return value


def _load_settings_file(path_value: Optional[str]) -> Dict[str, Any]:
    if not path_value:
        return {}
    path = Path(path_value).expanduser()
    if not path.exists():
        _log.warning("settings file %s does not exist; using defaults", path)
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        _log.warning("could not read settings file %s: %s", path, e)
        return {}
    if not isinstance(data, dict):
        _log.warning("settings file %s is not a JSON object; ignored", path)
        return {}
    return data


def load_settings(environ: Optional[Dict[str, str]] = None) -> Settings:
    """Build Settings from defaults, the settings file and the environment."""
    env = os.environ if environ is None else environ
    known = {f.name for f in fields(Settings)}
    values: Dict[str, Any] = {}

    for key, raw in _load_settings_file(env.get(SETTINGS_ENV)).items():
        if key not in known:
            _log.warning("ignoring unknown settings key %r", key)
            continue
        try:
            values[key] = _coerce(key, raw)
        except ValueError as e:
            _log.warning("ignoring settings key %r: %s", key, e)

    for env_name, key in _ENV_OVERRIDES.items():
        raw = env.get(env_name)
        if raw is None or not str(raw).strip():
            continue
        try:
            values[key] = _coerce(key, raw)
        except ValueError:
            _log.warning("ignoring %s=%r (not a valid %s)", env_name, raw, key)

    return Settings(**values)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()


def reload_settings() -> Settings:
    """Drop the cached settings (after the environment changed) and reload."""
    get_settings.cache_clear()
    return get_settings()
