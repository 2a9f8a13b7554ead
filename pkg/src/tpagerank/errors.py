"""Exception types shared across the package."""


class TPageRankError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(TPageRankError):
    """Malformed input file (edge list or MatrixMarket)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NegativeWeightError(GraphFormatError):
    """An edge carries a negative weight."""


class NonSquareError(GraphFormatError):
    """MatrixMarket matrix is not square."""


class ZeroRowError(TPageRankError):
    """A kernel operation hit a row with zero out-weight (graph not normalized)."""


class NonPositiveDerivativeError(TPageRankError):
    """Energy derivative is not bounded away from zero on [0, 1]."""


class NonPositiveError(TPageRankError):
    """A strictly positive matrix or vector was required."""


class BoundaryPointError(TPageRankError):
    """Projective-metric operation got a vector with a zero entry."""


class ConvergenceError(TPageRankError):
    """Iteration exceeded its budget without meeting the tolerance."""


class OscillationError(ConvergenceError):
    """Power-type iteration settled into a period-2 cycle."""


class InvalidConfigError(TPageRankError):
    """Inconsistent or out-of-range configuration."""
