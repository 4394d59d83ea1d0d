"""
Logging utility for nonnormal.

- DEBUG: Only shown when DEBUG=1 environment variable is set or level is "debug"
- INFO, WARN: Progress and configuration notices
- ERROR: Failures reported before a non-zero exit

Everything goes to STDERR; STDOUT is reserved for report output.
"""

import os
import sys
from typing import Any

_LEVELS = {"debug": 10, "info": 20, "warn": 30, "error": 40, "quiet": 100}
_level = _LEVELS["debug"] if os.environ.get('DEBUG', '0') == '1' else _LEVELS["info"]


def set_level(name: str) -> None:
    global _level
    if name not in _LEVELS:
        raise ValueError(f"Unknown log level: {name}")
    _level = _LEVELS[name]


def get_level() -> str:
    for name, value in _LEVELS.items():
        if value == _level:
            return name
    return "info"


def _emit(threshold: str, prefix: str, message: str, args) -> None:
    if _level > _LEVELS[threshold]:
        return
    formatted_message = message % args if args else message
    print(f"{prefix}{formatted_message}", file=sys.stderr)


def debug(message: str, *args: Any) -> None:
    _emit("debug", "[debug] ", message, args)


def info(message: str, *args: Any) -> None:
    _emit("info", "", message, args)


def warn(message: str, *args: Any) -> None:
    _emit("warn", "warning: ", message, args)


def error(message: str, *args: Any) -> None:
    _emit("error", "error: ", message, args)
