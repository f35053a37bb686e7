"""Service configuration: a JSON file plus EXPLIKIT_-prefixed env overrides.

Relative paths in a config file resolve against the file's directory, so the
bundled configuration works from anywhere. Environment overrides resolve
against the current working directory.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

ENV_PREFIX = "EXPLIKIT_"

_PATH_FIELDS = (
    "kb_path",
    "examples_path",
    "modes_path",
    "templates_path",
    "strings_path",
    "media_manifest_path",
    "media_root",
    "model_path",
    "ui_dist",
)


class ConfigError(Exception):
    pass


@dataclass
class ServiceConfig:
    kb_path: Path
    examples_path: Path
    modes_path: Path
    templates_path: Path
    strings_path: Path
    media_manifest_path: Path
    media_root: Path
    model_path: Path | None = None  # learned on the fly when absent
    ui_dist: Path | None = None  # optional static frontend build to serve
    listen_address: str = "127.0.0.1:8000"
    depth_limit: int = 64
    max_body_literals: int = 2
    session_ttl_seconds: int = 1800
    cors_origins: list[str] = field(default_factory=lambda: ["*"])

    def __post_init__(self) -> None:
        if self.depth_limit < 1 or self.max_body_literals < 0 or self.session_ttl_seconds < 1:
            raise ConfigError("limits must be positive")

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    def validate_paths(self) -> None:
        for name in _PATH_FIELDS:
            value = getattr(self, name)
            if value is not None and name not in ("model_path", "ui_dist") and not value.exists():
                raise ConfigError(f"{name} does not exist: {value}")


def bundled_data_dir() -> Path:
    """The packaged living-beings dataset directory."""
    return Path(str(resources.files("explikit").joinpath("data")))


def bundled_config_path() -> Path:
    return bundled_data_dir() / "config.json"


def load_config(
    path: Path | None = None, env: dict[str, str] | None = None
) -> ServiceConfig:
    """Load a config file (the bundled one by default) and apply env overrides."""
    env = dict(os.environ if env is None else env)
    env_path = env.get(f"{ENV_PREFIX}CONFIG")
    if path is None and env_path:
        path = Path(env_path)
    if path is None:
        path = bundled_config_path()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    base = Path(path).parent

    kwargs: dict = {}
    known = {f.name for f in fields(ServiceConfig)}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key: {key}")
        kwargs[key] = value
    for f in fields(ServiceConfig):
        override = env.get(f"{ENV_PREFIX}{f.name.upper()}")
        if override is not None:
            if f.name == "cors_origins":
                kwargs[f.name] = [o for o in override.split(",") if o]
            else:
                kwargs[f.name] = override
        if f.name in _PATH_FIELDS and kwargs.get(f.name) is not None:
            p = Path(kwargs[f.name])
            if not p.is_absolute():
                # env overrides are CWD-relative; file values are file-relative
                p = (Path.cwd() / p) if override is not None else (base / p)
            kwargs[f.name] = p
    for int_field in ("depth_limit", "max_body_literals", "session_ttl_seconds"):
        if int_field in kwargs:
            kwargs[int_field] = int(kwargs[int_field])
    missing = [
        name
        for name in (
            "kb_path",
            "examples_path",
            "modes_path",
            "templates_path",
            "strings_path",
            "media_manifest_path",
            "media_root",
        )
        if name not in kwargs
    ]
    if missing:
        raise ConfigError(f"config missing required keys: {', '.join(missing)}")
    return ServiceConfig(**kwargs)
