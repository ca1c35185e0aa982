"""Exception hierarchy for the ddmls package."""


class DdmlsError(Exception):
    """Base class for all ddmls errors."""


# geometry
class NonPositiveCellSize(DdmlsError):
    pass


class NonPositiveRadius(DdmlsError):
    pass


class EmptyNodeSet(DdmlsError):
    pass


class DuplicatePoint(DdmlsError):
    pass


class NonFiniteInput(DdmlsError):
    pass


# kernels / basis
class NegativeRadius(DdmlsError):
    pass


class DimensionMismatch(DdmlsError):
    pass


class UnsupportedDimension(DdmlsError):
    pass


# smoothness indicators
class NonPositiveDelta(DdmlsError):
    pass


class TooFewNodes(DdmlsError):
    pass


# local solves
class InsufficientNodes(DdmlsError):
    pass


class RankDeficient(DdmlsError):
    pass


# metrics
class EmptyErrors(DdmlsError):
    pass


class NonPositiveInput(DdmlsError):
    pass


# file ingestion
class ParseError(DdmlsError):
    """Malformed CSV content. ``line`` is the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
