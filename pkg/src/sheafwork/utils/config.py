"""Configuration management for sheafwork.

Sources, lowest precedence first: built-in defaults, the user config file,
an explicit ``--config`` file, the environment, then CLI flags (applied by
the caller through ``overrides``).
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from sheafwork.core.errors import SchemaError
from sheafwork.utils.paths import get_config_file

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: Dict[str, Any] = {
    "max_points": 12,
    "max_opens": 4096,
    "max_degree": 8,
    "max_pages": 12,
    "format": "text",
}

_INT_KEYS = ("max_points", "max_opens", "max_degree", "max_pages")
_FORMATS = ("text", "json")

ENV_MAX_OPENS = "SHEAFWORK_MAX_OPENS"


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise SchemaError(f"Config file {path} is not valid YAML: {e}", path="$") from e
    if not isinstance(data, dict):
        raise SchemaError(f"Config file {path} must contain a mapping", path="$")
    return data


def _merge(config: Dict[str, Any], data: Dict[str, Any], source: str) -> None:
    for key, value in data.items():
        if key not in DEFAULT_CONFIG:
            logger.warning(f"Ignoring unknown config key '{key}' from {source}")
            continue
        if value is None:
            continue
        config[key] = value


def _validate(config: Dict[str, Any]) -> Dict[str, Any]:
    for key in _INT_KEYS:
        value = config[key]
        try:
            if isinstance(value, bool):
                raise ValueError(value)
            value = int(value)
        except (TypeError, ValueError):
            value = -1
        if value < 0:
            raise SchemaError(
                f"Config key '{key}' must be a non-negative integer", path=f"$.{key}"
            )
        config[key] = value
    if config["format"] not in _FORMATS:
        raise SchemaError(f"Config key 'format' must be one of {_FORMATS}", path="$.format")
    return config


def get_config(
    config_file: Optional[Path] = None,
    overrides: Optional[Dict[str, Any]] = None,
    use_user_config: bool = True,
) -> Dict[str, Any]:
    """Load the effective configuration.

    Args:
        config_file: Explicit YAML configuration file
        overrides: Values from CLI flags; ``None`` values are ignored
        use_user_config: Whether to read the per-user config file

    Returns:
        The merged configuration dictionary
    """
    config = DEFAULT_CONFIG.copy()

    if use_user_config:
        user_file = get_config_file()
        if user_file.exists():
            _merge(config, _read_yaml(user_file), str(user_file))

    if config_file:
        if not config_file.exists():
            raise SchemaError(f"Config file not found: {config_file}", path="$")
        _merge(config, _read_yaml(config_file), str(config_file))

    load_dotenv(override=False)
    env_cap = os.getenv(ENV_MAX_OPENS)
    if env_cap:
        try:
            config["max_opens"] = int(env_cap)
        except ValueError:
            raise SchemaError(f"{ENV_MAX_OPENS} must be an integer, got '{env_cap}'", path="$env")

    if overrides:
        _merge(config, overrides, "command line")

    return _validate(config)
