"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MorphicError(Exception):
    """Base class for every error raised by this package."""


class ParseError(MorphicError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(MorphicError):
    def __init__(self, invariant: str, detail: str = "") -> None:
        text = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(text)
        self.invariant = invariant


class DivergenceError(MorphicError):
    pass


class EmptyWordError(MorphicError):
    pass


class PreconditionError(MorphicError):
    pass


class SearchBudgetExceeded(MorphicError):
    pass


class MissingMinimalPeriod(MorphicError):
    pass


class PrefixTooShort(MorphicError):
    pass


class UnboundedTailError(MorphicError):
    pass


class NotStable(MorphicError):
    pass


class NotStableMultiblock(MorphicError):
    pass


class CaseIError(MorphicError):
    pass


class WindowTooSmall(MorphicError):
    pass


class RangeError(MorphicError):
    pass


class InsufficientData(MorphicError):
    pass
