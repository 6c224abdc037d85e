"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LfwError(Exception):
    """Base class for library errors."""


class ParamsMismatchError(LfwError, ValueError):
    """Two objects built over different field parameters were combined."""


class DomainError(LfwError, ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(LfwError):
    """A decision procedure refuses to run because its hypothesis fails.

    The CLI maps this to exit code 3.
    """


class SetFileError(LfwError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}"
            if column is not None:
                where += f", column {column}"
        super().__init__(message + where)
