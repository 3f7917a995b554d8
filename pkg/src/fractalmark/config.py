"""Flat ``key=value`` configuration files.

One assignment per line; blank lines and ``#`` comments are ignored. CLI
flags override file values, which override built-in defaults.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable, TypeVar

from .errors import InputError

T = TypeVar("T")


def load_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"config file not found: {path}")
    out: dict[str, str] = {}
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InputError(f"{path}:{line_no}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out


def resolve(
    flag_value: T | None,
    config: dict[str, str],
    key: str,
    default: T,
    convert: Callable[[str], T],
) -> T:
    """Flag > config-file entry > default, converting config text as needed."""
    if flag_value is not None:
        return flag_value
    if key in config:
        try:
            return convert(config[key])
        except (ValueError, TypeError):
            raise InputError(f"config key {key!r}: cannot parse {config[key]!r}") from None
    return default
