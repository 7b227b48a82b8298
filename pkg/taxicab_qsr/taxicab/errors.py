"""Exception hierarchy for table validation, decomposition and report I/O."""

from __future__ import annotations


class TaxicabError(ValueError):
    """Base class for data errors raised by the taxicab tools."""


class UsageError(Exception):
    """Raised for invalid command-line usage."""


class ConfigurationError(TaxicabError):
    """Raised when a settings file or search configuration is invalid."""


# ---------------------------------------------------------------------------
# Table validation
# ---------------------------------------------------------------------------


class NegativeEntryError(TaxicabError):
    def __init__(self, i: int, j: int, value: float):
        super().__init__(f"Negative entry {value!r} at cell ({i}, {j})")
        self.i = i
        self.j = j
        self.value = value


class AllZeroError(TaxicabError):
    def __init__(self) -> None:
        super().__init__("Table has no positive entry")


class DuplicateLabelError(TaxicabError):
    def __init__(self, name: str, axis: str):
        super().__init__(f"Duplicate {axis} label '{name}'")
        self.name = name
        self.axis = axis


class TooSmallError(TaxicabError):
    def __init__(self, n_rows: int, n_cols: int):
        super().__init__(f"Table must be at least 2x2, got {n_rows}x{n_cols}")
        self.n_rows = n_rows
        self.n_cols = n_cols


class ShapeMismatchError(TaxicabError):
    """Raised when values are not rectangular or labels do not match the shape."""


class ZeroMassError(TaxicabError):
    def __init__(self, axis: str, index: int):
        super().__init__(f"Zero marginal mass for {axis} {index}")
        self.axis = axis
        self.index = index


# ---------------------------------------------------------------------------
# Centering
# ---------------------------------------------------------------------------


class ZeroCellError(TaxicabError):
    """Raised by TLRA centering on a zero cell; apply a pseudocount first."""

    def __init__(self, i: int, j: int, row_label: str | None = None, col_label: str | None = None):
        where = f"({i}, {j})"
        if row_label is not None and col_label is not None:
            where = f"({row_label}, {col_label}) at {where}"
        super().__init__(f"Zero cell {where}: log-ratio centering needs strictly positive cells, use --add-one")
        self.i = i
        self.j = j
        self.row_label = row_label
        self.col_label = col_label


class NonPositiveConstantError(TaxicabError):
    def __init__(self, c: float):
        super().__init__(f"Pseudocount must be positive, got {c!r}")
        self.c = c


class NotDoubleCenteredError(TaxicabError):
    """Raised when a residual matrix has non-zero row or column sums."""


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


class DimensionMismatchError(TaxicabError):
    def __init__(self, expected: int, actual: int):
        super().__init__(f"Sign vector has length {actual}, expected {expected}")
        self.expected = expected
        self.actual = actual


class DimensionTooLargeError(TaxicabError):
    def __init__(self, d: int, cap: int):
        super().__init__(
            f"Exhaustive search over {d} coordinates exceeds the cap of {cap}; use crisscross or genetic search"
        )
        self.d = d
        self.cap = cap


class ZeroDispersionError(TaxicabError):
    """Raised when an axis carries no dispersion; the decomposition is complete."""


class ZeroResidualError(TaxicabError):
    """Raised when QSR is requested for an all-zero residual matrix."""


class AxisOutOfRangeError(TaxicabError):
    def __init__(self, axis_pair: tuple[int, int], n_axes: int):
        super().__init__(f"Axis pair {axis_pair} is invalid for {n_axes} retained axes (need two distinct axes)")
        self.axis_pair = axis_pair
        self.n_axes = n_axes


class MismatchedAxesError(TaxicabError):
    """Raised when QSR lists do not cover the axes being compared."""


# ---------------------------------------------------------------------------
# Report I/O
# ---------------------------------------------------------------------------


class CsvParseError(TaxicabError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {col})" if col is not None else ")")
        super().__init__(f"{message}{location}")
        self.line = line
        self.col = col


class RaggedRowsError(CsvParseError):
    """Raised when CSV rows have different numbers of fields."""


class NonNumericCellError(CsvParseError):
    """Raised when a data cell cannot be parsed as a number."""


class ReportIoError(TaxicabError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"Cannot access report at {path}: {reason}")
        self.path = path
        self.reason = reason
