"""Caps and tolerances shared by every module.

Resolution order for each field: explicit override -> GREEDYBASES_<FIELD> env ->
config.json -> default.
"""
from __future__ import annotations

import os
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from .exceptions import InvalidParameterError
from .paths import load_config

ENV_PREFIX = "GREEDYBASES_"


class Settings(BaseModel):
    cap_dim: int = Field(default=24, ge=1, le=64)
    cap_subset: int = Field(default=12, ge=0, le=64)
    corpus_size: int = Field(default=1000, ge=1)
    default_dim: int = Field(default=6, ge=1)
    tie_limit: int = Field(default=24, ge=1)
    abs_tol: float = Field(default=1e-9, gt=0.0)
    rel_tol: float = Field(default=1e-12, ge=0.0)
    golden_tol: float = Field(default=1e-10, gt=0.0)
    workers: int = Field(default=1, ge=1)
    seed: int = 42

    model_config = {"frozen": True, "extra": "forbid"}

    def leq(self, lhs: float, rhs: float) -> bool:
        """lhs <= rhs up to the configured absolute/relative tolerance."""
        return lhs <= rhs + self.abs_tol + self.rel_tol * abs(rhs)


def _from_environment() -> dict[str, Any]:
    values: dict[str, Any] = {}
    for name in Settings.model_fields:
        raw = os.environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    return values


def load_settings(**overrides: Any) -> Settings:
    """Build Settings from config.json, the environment and explicit overrides."""
    cfg = load_config()
    values: dict[str, Any] = {}
    section = cfg.get("settings") if isinstance(cfg, dict) else None
    if isinstance(section, dict):
        values.update(section)
    values.update(_from_environment())
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**values)
    except ValidationError as exc:
        raise InvalidParameterError(f"Invalid settings: {exc}") from exc


_cached_settings: Settings | None = None


def get_settings() -> Settings:
    """Process-wide settings without overrides (cached)."""
    global _cached_settings
    if _cached_settings is None:
        _cached_settings = load_settings()
    return _cached_settings


def reset_settings_cache():
    global _cached_settings
    _cached_settings = None


def configure_settings(**overrides: Any) -> Settings:
    """Replace the process-wide settings, e.g. with CLI flag values."""
    global _cached_settings
    _cached_settings = load_settings(**overrides)
    return _cached_settings
