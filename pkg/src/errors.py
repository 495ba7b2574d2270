"""Exception hierarchy for logderiv"""

from typing import Optional


class LogDerivError(ValueError):
    """Base class for every error raised by the library"""


class ParseError(LogDerivError):
    """Malformed arrangement file or polynomial expression"""

    def __init__(self, message: str, line: int = 1, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")


class DegenerateLine(LogDerivError):
    """Line with (alpha, beta) = (0, 0)"""


class DuplicateLine(LogDerivError):
    """Two input lines normalize to the same line"""


class EmptyArrangement(LogDerivError):
    """Arrangement without lines"""


class UnknownName(LogDerivError):
    """Unknown built-in arrangement name"""


class NoSingularPoint(LogDerivError):
    """Arrangement has no singular point (all lines parallel)"""


class InfiniteType(LogDerivError):
    """Operation requires a finite-type vector field"""


class AmbiguousClass(LogDerivError):
    """Classification system could not be resolved to a single class"""


class DimensionTooLarge(LogDerivError):
    """Subspace dimension exceeds the grid decision cap"""

    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"subspace dimension {dim} exceeds grid cap {cap}")
