"""Exception types used across the package."""

from __future__ import annotations

from .scalars import DivisionByZero


class RankMismatch(ValueError):
    """Composed morphisms do not share the middle object."""

    def __init__(self, message: str, ranks: tuple | None = None, column: int | None = None):
        super().__init__(message if column is None else f"{message} at column {column}")
        self.ranks = ranks
        self.column = column


class IndexOutOfRange(ValueError):
    """A generator index does not fit its rank."""


class BudgetExceeded(RuntimeError):
    """Normalization ran past its rewrite budget."""


class CutoffExceeded(RuntimeError):
    """A truncated Verma computation needed weights past the cutoff."""


class ParseError(ValueError):
    """Malformed morphism expression."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


__all__ = [
    "BudgetExceeded",
    "CutoffExceeded",
    "DivisionByZero",
    "IndexOutOfRange",
    "ParseError",
    "RankMismatch",
]
