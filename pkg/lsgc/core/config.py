from __future__ import annotations

import logging
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pydantic
from dotenv import dotenv_values, load_dotenv

from lsgc import DOTENV_FILE
from lsgc.core.exceptions import ConfigError
from lsgc.core.models import RunConfig

ENV_PREFIX = "LSGC_"
LOGS_DIR: Path = DOTENV_FILE.parent / "logs"

_SIZE_PATTERN = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([KMGT]i?B?|B)?\s*$", re.IGNORECASE)
_SIZE_UNITS = {"": 1, "B": 1, "K": 1 << 10, "M": 1 << 20, "G": 1 << 30, "T": 1 << 40}
_SIZE_KEYS = {"segment_size", "gc_retrieval_bytes", "wss_min_bytes"}

# flat key -> path inside RunConfig
FLAT_KEYS: dict[str, tuple[str, ...]] = {
    "scheme": ("scheme",),
    "selector": ("selector",),
    "segment_size": ("volume", "segment_size"),
    "gp_threshold": ("volume", "gp_threshold"),
    "gc_retrieval_bytes": ("volume", "gc_retrieval_bytes"),
    "num_classes": ("volume", "num_classes"),
    "sepbit_thresholds": ("sepbit", "thresholds"),
    "sepbit_threshold_scale": ("sepbit", "threshold_scale"),
    "sepbit_index": ("sepbit", "index"),
    "sepbit_window": ("sepbit", "window"),
    "workload": ("workload", "kind"),
    "trace": ("workload", "trace"),
    "trace_format": ("workload", "trace_format"),
    "columns": ("workload", "columns"),
    "annotations": ("workload", "annotations"),
    "volumes": ("workload", "volumes"),
    "filter_volumes": ("workload", "filter_volumes"),
    "wss_min_bytes": ("workload", "wss_min_bytes"),
    "traffic_multiple": ("workload", "traffic_multiple"),
    "wss_blocks": ("workload", "synthetic", "wss_blocks"),
    "alpha": ("workload", "synthetic", "alpha"),
    "total_writes": ("workload", "synthetic", "total_writes"),
    "hot_fraction": ("workload", "synthetic", "hot_fraction"),
    "churn_period_blocks": ("workload", "synthetic", "churn_period_blocks"),
    "seed": ("workload", "synthetic", "seed"),
    "output_dir": ("output_dir",),
    "gc_log": ("gc_log",),
    "jobs": ("jobs",),
}


def _to_bool(value: str | None, default: bool) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _to_log_level(value: str | None, default: int, key: str) -> int:
    if value is None or not value.strip():
        return default
    stripped = value.strip()
    if stripped.isdigit():
        return int(stripped)
    level = logging.getLevelName(stripped.upper())
    if not isinstance(level, int):
        raise ValueError(f"{key} must be a logging level name")
    return level


def parse_size(value: str | int, key: str = "size") -> int:
    """Parse `512MiB`, `4K`, `10GiB` or a plain byte count."""
    if isinstance(value, int):
        return value
    match = _SIZE_PATTERN.match(value)
    if not match:
        raise ConfigError(f"{key} must be a byte count such as 4096 or 512MiB")
    number, unit = match.groups()
    scale = _SIZE_UNITS[(unit or "")[:1].upper()]
    return int(float(number) * scale)


@dataclass(frozen=True)
class Settings:
    log_level: int = logging.INFO
    file_log_level: int = logging.DEBUG
    log_dir: Path = LOGS_DIR
    log_to_file: bool = True
    env_prefix: str = ENV_PREFIX

    @property
    def log_path(self) -> Path | None:
        if not self.log_to_file:
            return None
        return self.log_dir / "lsgc.log"


def load_settings() -> Settings:
    load_dotenv(DOTENV_FILE)
    log_dir = os.getenv("LSGC_LOG_DIR", "").strip()
    return Settings(
        log_level=_to_log_level(
            os.getenv("LSGC_LOG_LEVEL"), default=logging.INFO, key="LSGC_LOG_LEVEL"
        ),
        file_log_level=_to_log_level(
            os.getenv("LSGC_FILE_LOG_LEVEL"),
            default=logging.DEBUG,
            key="LSGC_FILE_LOG_LEVEL",
        ),
        log_dir=Path(log_dir) if log_dir else LOGS_DIR,
        log_to_file=_to_bool(os.getenv("LSGC_LOG_TO_FILE"), default=True),
    )


def read_config_file(path: Path) -> dict[str, str]:
    """Read a flat key=value run configuration."""
    if not path.is_file():
        raise ConfigError(f"config file '{path}' does not exist")
    raw = dotenv_values(path)
    values: dict[str, str] = {}
    for key, value in raw.items():
        normalized = key.strip().lower().replace("-", "_")
        if normalized not in FLAT_KEYS:
            raise ConfigError(f"config file '{path}' has unknown key '{key}'")
        if value is not None:
            values[normalized] = value
    return values


def env_overrides(environ: Mapping[str, str], prefix: str = ENV_PREFIX) -> dict[str, str]:
    values: dict[str, str] = {}
    for key in FLAT_KEYS:
        value = environ.get(f"{prefix}{key.upper()}")
        if value is not None and value.strip():
            values[key] = value.strip()
    return values


def build_run_config(flat: Mapping[str, Any]) -> RunConfig:
    nested: dict[str, Any] = {}
    for key, value in flat.items():
        path = FLAT_KEYS.get(key)
        if path is None:
            raise ConfigError(f"unknown configuration key '{key}'")
        if key in _SIZE_KEYS and value is not None:
            value = parse_size(value, key=key)
        if key == "volumes" and isinstance(value, str):
            value = [item.strip() for item in value.split(",") if item.strip()]
        cursor = nested
        for part in path[:-1]:
            cursor = cursor.setdefault(part, {})
        cursor[path[-1]] = value
    try:
        return RunConfig.model_validate(nested)
    except pydantic.ValidationError as exc:
        details = "; ".join(
            f"{'.'.join(str(loc) for loc in error['loc'])}: {error['msg']}"
            for error in exc.errors()
        )
        raise ConfigError(f"invalid run configuration: {details}") from exc


def load_run_config(
    config_file: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """
    Layer the run configuration: CLI overrides beat `LSGC_*` environment
    variables, which beat the config file, which beats model defaults.
    """
    flat: dict[str, Any] = {}
    if config_file is not None:
        flat.update(read_config_file(config_file))
    flat.update(env_overrides(os.environ if environ is None else environ))
    if overrides:
        flat.update({key: value for key, value in overrides.items() if value is not None})
    return build_run_config(flat)


def flatten_run_config(config: RunConfig) -> dict[str, str]:
    """Inverse of `build_run_config`; the text form is accepted by `--config`."""
    dumped = config.model_dump(mode="json")
    flat: dict[str, str] = {}
    for key, path in FLAT_KEYS.items():
        value: Any = dumped
        for part in path:
            value = value.get(part) if isinstance(value, dict) else None
        if value is None:
            continue
        if isinstance(value, list):
            if not value:
                continue
            value = ",".join(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        flat[key] = str(value)
    return flat


def render_config_file(config: RunConfig) -> str:
    return "".join(f"{key}={value}\n" for key, value in flatten_run_config(config).items())
