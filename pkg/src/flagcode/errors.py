"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class FlagCodeError(Exception):
    """Base class for all errors raised by :mod:`flagcode`."""


class DomainError(FlagCodeError, ValueError):
    """Arguments outside an operation's domain (shape, field or index mismatch)."""


class CellError(FlagCodeError):
    """A subspace or flag is not in the big cell, so no matrix can be extracted."""


class BudgetError(FlagCodeError):
    """An exhaustive enumeration would exceed the configured element budget."""

    def __init__(self, required: int, budget: int, what: str = "elements"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration of {required} {what} exceeds the budget of {budget}; "
            "use a smaller field, matrix size or code dimension"
        )


class ParseError(FlagCodeError):
    """Malformed text input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class ValidationError(FlagCodeError):
    """Well-formed input that violates a semantic requirement (e.g. not a codeword)."""
