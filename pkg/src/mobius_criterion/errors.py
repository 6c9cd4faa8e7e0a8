"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class MobiusCriterionError(Exception):
    """Base class for all package errors."""


class DomainError(MobiusCriterionError, ValueError):
    """An argument lies outside the mathematical domain of the function."""


class PreconditionError(MobiusCriterionError, ValueError):
    """A caller-side precondition (ordering, coverage, range) is violated."""


class ResourceError(MobiusCriterionError, MemoryError):
    """The requested table would exceed the configured memory budget."""


class CheckpointFormatError(MobiusCriterionError, ValueError):
    """A checkpoint file line could not be parsed."""

    def __init__(self, lineno: int, line: str, reason: str) -> None:
        self.lineno = lineno
        self.line = line
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}: {line!r}")
