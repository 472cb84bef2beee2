"""Exception types shared across the package.

The CLI maps these onto exit codes: ``FormatError`` and ``UsageError`` give 1,
``ResourceRefusal`` (and its subclass ``BudgetExceeded``) give 2.
"""

from __future__ import annotations


class LegalSysError(Exception):
    """Base class for all errors raised by legalsys."""


class UsageError(LegalSysError):
    """An operation was called with inputs that violate its preconditions."""


class FormatError(UsageError):
    """A text or JSON file could not be parsed."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class ResourceRefusal(LegalSysError):
    """The requested computation exceeds a configured size threshold."""


class BudgetExceeded(ResourceRefusal):
    """A search ran out of its node budget before reaching a verdict."""

    def __init__(self, message: str, nodes: int = 0):
        self.nodes = nodes
        super().__init__(message)
