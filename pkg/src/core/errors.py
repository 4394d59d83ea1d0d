"""Exception hierarchy and CLI exit codes."""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATION = 3


class NonNormalError(Exception):
    """Base class for all library errors."""


class ParameterError(NonNormalError, ValueError):
    """Invalid base, digit, index or configuration value."""


class DomainError(NonNormalError, ValueError):
    """Value outside the domain of an operation (e.g. x not in [0,1))."""


class ContractError(NonNormalError):
    """Input violates an operation contract (wrong stream or measure shape)."""


class NotInSupportError(ContractError):
    """A digit sequence is not the image of any x under f_p.

    Attributes:
        position: 1-based position of the first offending digit
        expected: Digit the fixed position requires
        found: Digit actually present
    """

    def __init__(self, position: int, expected: int, found: int):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"not in S_p: position {position} is fixed to {expected}, found {found}"
        )


class ResourceLimitError(NonNormalError, RuntimeError):
    """A guarded computation would exceed its configured limit."""

    def __init__(self, message: str, limit: Optional[int] = None):
        self.limit = limit
        super().__init__(message)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the stable CLI exit code."""
    if isinstance(exc, ParameterError):
        return EXIT_USAGE
    if isinstance(exc, NonNormalError):
        return EXIT_VIOLATION
    return 1
