"""
Exception hierarchy.

Every failure raised by the package derives from SynthesisError so callers
can catch the whole family at the CLI boundary.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .domain.models import ValidationReport


class SynthesisError(Exception):
    """Base class for all package errors."""


class InputError(SynthesisError, ValueError):
    """
    Malformed user input.

    Attributes:
        message: Human-readable description
        location: Where the problem sits (JSON path, line/column), if known
    """

    def __init__(self, message: str, location: str | None = None):
        self.message = message
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ParseError(InputError):
    """Syntax error in a game file or an action formula."""

    def __init__(
        self,
        message: str,
        location: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ):
        self.line = line
        self.column = column
        super().__init__(message, location)


class RationalityError(InputError):
    """The adversary can be forced into violating its own constraints."""

    def __init__(self, message: str, report: ValidationReport | None = None):
        self.report = report
        super().__init__(message)


class StateError(SynthesisError, RuntimeError):
    """Operation invoked in a state where it is undefined."""


class StrategyError(StateError):
    """A strategy has no decision at a reached situation."""


class GenerationError(SynthesisError):
    """Random game generation cannot satisfy its parameters."""
