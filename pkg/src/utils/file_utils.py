"""File utility functions."""

import os
from typing import List, Optional

from . import logger
from ..core.errors import DomainError, ParameterError


def read_digit_file(path: str, base: int) -> List[int]:
    """Read a digit file: one ASCII digit per byte, newlines ignored.

    Digits above 9 use letters (a = 10, ..., z = 35).

    Args:
        path: File path
        base: Declared base of the digits

    Returns:
        List[int]: Digits in file order
    """
    if not os.path.isfile(path):
        raise ParameterError(f"digit file not found: {path}")
    with open(path, 'rb') as f:
        data = f.read()

    digits = []
    for offset, byte in enumerate(data):
        char = chr(byte)
        if char in '\r\n':
            continue
        try:
            digit = int(char, 36)
        except ValueError:
            raise DomainError(f"{path}: byte {offset} ({char!r}) is not a digit")
        if digit >= base:
            raise DomainError(f"{path}: digit {char!r} at byte {offset} exceeds base {base}")
        digits.append(digit)

    logger.debug(f"Read {len(digits)} digits from {path}")
    return digits


def write_output(text: str, path: Optional[str] = None) -> None:
    """Write report text to path, or to stdout when path is None."""
    if path is None:
        print(text, end='' if text.endswith('\n') else '\n')
        return
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'w', newline='') as f:
        f.write(text if text.endswith('\n') else text + '\n')
    logger.debug(f"Wrote report to {path}")
