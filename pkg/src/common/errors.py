"""
Exception hierarchy for the Gap statistic toolkit.

Two families:
    UsageError      - bad input, bad flags, bad parameters (CLI exit 2)
    NumericalError  - valid input on which a computation is undefined (CLI exit 1)
"""

from __future__ import annotations


class GapToolkitError(Exception):
    """Base class for every error raised by this project."""


class UsageError(GapToolkitError):
    pass


class NumericalError(GapToolkitError):
    pass


# ---------------------------------------------------------------------
# Input / dataset errors
# ---------------------------------------------------------------------

class ParseError(UsageError):
    """A CSV cell could not be read. row and column are 1-based file positions."""

    def __init__(self, row: int, column: int, message: str = ""):
        self.row = row
        self.column = column
        detail = f": {message}" if message else ""
        super().__init__(f"parse error at row {row}, column {column}{detail}")


class EmptyDataset(UsageError):
    pass


class InvalidDataset(UsageError):
    pass


class DimensionMismatch(UsageError):
    pass


class UnsupportedMetric(UsageError):
    pass


class InvalidK(UsageError):
    pass


class IndexOutOfRange(UsageError):
    pass


class InvalidConfig(UsageError):
    pass


class NonPositiveSide(UsageError):
    pass


class InvalidScenario(UsageError):
    pass


class NotTwoClusters(UsageError):
    pass


class InvalidRow(UsageError):
    pass


class InvalidExperiment(UsageError):
    pass


class HeterogeneousReports(UsageError):
    pass


# ---------------------------------------------------------------------
# Numerical failures
# ---------------------------------------------------------------------

class DegenerateDispersion(NumericalError):
    """A pooled W_k is zero, so log(W_k) is undefined."""

    def __init__(self, k: int, message: str = ""):
        self.k = k
        super().__init__(message or f"within-cluster dispersion is zero at k={k}")


class NonPositiveDispersion(NumericalError):
    def __init__(self, k: int, value: float):
        self.k = k
        self.value = value
        super().__init__(f"log variant needs W_k > 0, got W_{k} = {value!r}")
