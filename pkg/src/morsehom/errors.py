"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MorseHomError(Exception):
    """Base class for errors raised by this package."""


class InvalidSimplex(MorseHomError, ValueError):
    pass


class DimensionError(MorseHomError, ValueError):
    pass


class NotInSpan(MorseHomError, ArithmeticError):
    """A right-hand side is not in the column span of the system matrix."""


class NotFullRank(MorseHomError, ArithmeticError):
    pass


class Singular(MorseHomError, ArithmeticError):
    pass


class ClassificationError(MorseHomError, RuntimeError):
    """Tree / pairing / generator partition disagrees with the rank formula."""


class InvalidDecomposition(MorseHomError, ValueError):
    pass


class InvalidFiltration(MorseHomError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OrientedReductionUndefined(MorseHomError, ArithmeticError):
    """The rational solution has no image in GF(2) (even denominator)."""


class ParseError(MorseHomError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormatError(MorseHomError, ValueError):
    pass
