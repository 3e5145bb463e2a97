"""Path management for sheafwork.

Centralizes where the user configuration file lives so the CLI and the
config loader agree on it.
"""

import os
import sys
from pathlib import Path

APP_NAME = "sheafwork"

HOME_DIR = Path.home()

XDG_CONFIG_HOME = Path(os.environ.get("XDG_CONFIG_HOME", HOME_DIR / ".config"))

# Config directory: precedence is ENV > Windows APPDATA > XDG
if sys.platform == "win32":
    _default_config_dir = Path(os.environ.get("APPDATA", HOME_DIR / "AppData" / "Roaming")) / APP_NAME
else:
    _default_config_dir = XDG_CONFIG_HOME / APP_NAME


def get_config_dir() -> Path:
    """Get the sheafwork configuration directory (not created)."""
    return Path(os.environ.get("SHEAFWORK_CONFIG_DIR", _default_config_dir))


def get_config_file() -> Path:
    """Get the user-level configuration file path."""
    return get_config_dir() / "config.yaml"


def ensure_path(path: str | Path) -> Path:
    """Ensure a directory exists and return it as a Path."""
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
