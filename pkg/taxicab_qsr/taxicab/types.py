"""Shared domain types: tables, residual matrices, axes, decompositions and QSR records."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from .config import CENTERING_TOL, COL_LABEL_PREFIX, MASS_TOL, ROW_LABEL_PREFIX
from .errors import (
    AllZeroError,
    DimensionMismatchError,
    DuplicateLabelError,
    NegativeEntryError,
    NotDoubleCenteredError,
    ShapeMismatchError,
    TaxicabError,
    TooSmallError,
)

Matrix = npt.NDArray[np.float64]
Vector = npt.NDArray[np.float64]


class Method(str, Enum):
    """Centering method, which names the whole pipeline."""

    TCA = "tca"
    TLRA = "tlra"


class SearchStrategy(str, Enum):
    EXHAUSTIVE = "exhaustive"
    CRISSCROSS = "crisscross"
    GENETIC = "genetic"


class Origin(str, Enum):
    TCA_CENTERED = "tca_centered"
    TLRA_CENTERED = "tlra_centered"
    DEFLATED = "deflated"


class Verdict(str, Enum):
    PREFER_TCA = "PreferTCA"
    PREFER_TLRA = "PreferTLRA"
    INCONCLUSIVE = "Inconclusive"


def frozen_array(values: object) -> Matrix:
    """Copy values into a read-only float64 array."""
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


def sign(x: npt.ArrayLike) -> Vector:
    """Coordinatewise sign with sign(0) = -1."""
    return np.where(np.asarray(x, dtype=np.float64) > 0, 1.0, -1.0)


def centering_tolerance(x: Matrix) -> float:
    """Absolute-relative hybrid tolerance for centering and balance checks."""
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    return CENTERING_TOL * max(1.0, scale)


def validate_sign_vector(s: npt.ArrayLike, n: int) -> Vector:
    """Return s as a float array after checking its length and that entries are +/-1."""
    vector = np.asarray(s, dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != n:
        raise DimensionMismatchError(expected=n, actual=int(vector.size))
    if not np.all(np.abs(vector) == 1.0):
        raise TaxicabError("Sign vector entries must be -1 or +1")
    return vector


def synthetic_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{k}" for k in range(1, n + 1))


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Nonnegative I x J table of counts or composition parts with unique labels."""

    values: Matrix
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    name: str = ""

    def __post_init__(self) -> None:
        try:
            values = np.array(self.values, dtype=np.float64, copy=True)
        except (TypeError, ValueError) as exc:
            raise ShapeMismatchError(f"Table values are not a rectangular numeric grid: {exc}") from None
        if values.ndim != 2:
            raise ShapeMismatchError(f"Table values must be two-dimensional, got {values.ndim} dimension(s)")

        n_rows, n_cols = values.shape
        if n_rows < 2 or n_cols < 2:
            raise TooSmallError(n_rows, n_cols)
        if len(self.row_labels) != n_rows or len(self.col_labels) != n_cols:
            raise ShapeMismatchError(
                f"Expected {n_rows} row and {n_cols} column labels, "
                f"got {len(self.row_labels)} and {len(self.col_labels)}"
            )
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise TaxicabError(f"Non-finite entry at cell ({i}, {j})")

        negative = np.argwhere(values < 0)
        if negative.size:
            i, j = (int(k) for k in negative[0])
            raise NegativeEntryError(i, j, float(values[i, j]))
        if not np.any(values > 0):
            raise AllZeroError()

        for axis, labels in (("row", self.row_labels), ("column", self.col_labels)):
            seen: set[str] = set()
            for label in labels:
                if label in seen:
                    raise DuplicateLabelError(label, axis)
                seen.add(label)

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_labels", tuple(str(label) for label in self.row_labels))
        object.__setattr__(self, "col_labels", tuple(str(label) for label in self.col_labels))

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.values.shape[1])

    @property
    def rank_bound(self) -> int:
        return min(self.n_rows - 1, self.n_cols - 1)

    @classmethod
    def from_rows(
        cls,
        values: Sequence[Sequence[float]] | Matrix,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
        name: str = "",
    ) -> ContingencyTable:
        """Build a table, generating R1..RI / C1..CJ labels when none are given."""
        rows = list(values)
        if not rows:
            raise TooSmallError(0, 0)
        if any(len(row) != len(rows[0]) for row in rows):
            raise ShapeMismatchError("Table rows have different lengths")
        n_rows, n_cols = len(rows), len(rows[0])
        return cls(
            values=np.asarray(rows, dtype=np.float64),
            row_labels=tuple(row_labels) if row_labels is not None else synthetic_labels(ROW_LABEL_PREFIX, n_rows),
            col_labels=tuple(col_labels) if col_labels is not None else synthetic_labels(COL_LABEL_PREFIX, n_cols),
            name=name,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class CorrespondenceMatrix:
    """P = N / t with its row and column masses; keeps N for log-ratio centering."""

    p: Matrix
    row_masses: Vector
    col_masses: Vector
    total: float
    counts: Matrix

    def __post_init__(self) -> None:
        if not self.total > 0:
            raise TaxicabError(f"Correspondence total must be positive, got {self.total!r}")
        if abs(float(self.p.sum()) - 1.0) > MASS_TOL:
            raise TaxicabError("Correspondence matrix does not sum to 1")
        if np.max(np.abs(self.p.sum(axis=1) - self.row_masses)) > MASS_TOL:
            raise TaxicabError("Row masses do not match the correspondence matrix")
        if np.max(np.abs(self.p.sum(axis=0) - self.col_masses)) > MASS_TOL:
            raise TaxicabError("Column masses do not match the correspondence matrix")


@dataclass(frozen=True, eq=False)
class ResidualMatrix:
    """Double-centered residual matrix X_alpha of the deflation sequence."""

    x: Matrix
    origin: Origin
    step: int = 1

    def __post_init__(self) -> None:
        x = frozen_array(self.x)
        if x.ndim != 2:
            raise ShapeMismatchError("Residual matrix must be two-dimensional")
        tol = centering_tolerance(x)
        row_err = float(np.max(np.abs(x.sum(axis=1))))
        col_err = float(np.max(np.abs(x.sum(axis=0))))
        if row_err > tol or col_err > tol:
            raise NotDoubleCenteredError(
                f"Residual matrix is not double-centered (max |row sum| {row_err:.3e}, "
                f"max |column sum| {col_err:.3e}, tolerance {tol:.3e})"
            )
        object.__setattr__(self, "x", x)

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.x.shape[0]), int(self.x.shape[1])

    @property
    def total_abs(self) -> float:
        return float(np.abs(self.x).sum())


# ---------------------------------------------------------------------------
# Decomposition results
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AxisResult:
    """One taxicab axis: sign vectors u (columns) and v (rows), scores a and b, dispersion delta."""

    u: Vector
    v: Vector
    a: Vector
    b: Vector
    delta: float
    axis_index: int
    converged: bool = True
    iterations: int = 0

    def __post_init__(self) -> None:
        for name in ("u", "v", "a", "b"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        validate_sign_vector(self.u, self.b.shape[0])
        validate_sign_vector(self.v, self.a.shape[0])
        if self.axis_index < 1:
            raise TaxicabError(f"Axis index must be >= 1, got {self.axis_index}")

    @property
    def row_partition(self) -> tuple[int, ...]:
        """S = {i : a(i) > 0}."""
        return tuple(int(i) for i in np.flatnonzero(self.a > 0))

    @property
    def col_partition(self) -> tuple[int, ...]:
        """T = {j : b(j) > 0}."""
        return tuple(int(j) for j in np.flatnonzero(self.b > 0))


@dataclass(frozen=True)
class TableRef:
    """Provenance of the table a decomposition was computed from."""

    name: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @classmethod
    def of(cls, table: ContingencyTable) -> TableRef:
        return cls(name=table.name, row_labels=table.row_labels, col_labels=table.col_labels)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Ordered taxicab axes with the residual snapshot each axis was computed from."""

    method: Method
    axes: tuple[AxisResult, ...]
    centered: ResidualMatrix
    rank_bound: int
    search: SearchStrategy
    residuals: tuple[ResidualMatrix, ...] = ()
    table_ref: TableRef | None = None

    def __post_init__(self) -> None:
        if len(self.axes) > self.rank_bound:
            raise TaxicabError(f"{len(self.axes)} axes exceed the rank bound {self.rank_bound}")
        if self.residuals and len(self.residuals) != len(self.axes):
            raise TaxicabError("Residual snapshots must match the number of axes")

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(axis.delta for axis in self.axes)

    @property
    def n_axes(self) -> int:
        return len(self.axes)


@dataclass(frozen=True)
class QsrRecord:
    """Quality of the signs of the residuals for one axis, overall and per quadrant."""

    axis_index: int
    q_st: float
    q_sbar_tbar: float
    q_s_tbar: float
    q_sbar_t: float
    overall: float
    delta: float
    # cells in S x T, S-bar x T-bar, S x T-bar, S-bar x T
    quadrant_cells: tuple[int, int, int, int] = (0, 0, 0, 0)

    QUADRANTS = ("S x T", "Sbar x Tbar", "S x Tbar", "Sbar x T")
    TOL = 1e-9

    def __post_init__(self) -> None:
        """Positive quadrants lie in (0, 1], negative ones in [-1, 0), overall in (0, 1].

        Raises:
            TaxicabError: If a value is out of range or overall = 1 without every quadrant at +/-1
        """
        for name, value in zip(self.QUADRANTS[:2], (self.q_st, self.q_sbar_tbar), strict=True):
            if not 0.0 < value <= 1.0 + self.TOL:
                raise TaxicabError(f"Axis {self.axis_index}: QSR of {name} must be in (0, 1], got {value}")
        for name, value in zip(self.QUADRANTS[2:], (self.q_s_tbar, self.q_sbar_t), strict=True):
            if not -1.0 - self.TOL <= value < 0.0:
                raise TaxicabError(f"Axis {self.axis_index}: QSR of {name} must be in [-1, 0), got {value}")
        if not 0.0 < self.overall <= 1.0 + self.TOL:
            raise TaxicabError(f"Axis {self.axis_index}: overall QSR must be in (0, 1], got {self.overall}")
        if not self.satisfies_sign_lemma(self.TOL):
            raise TaxicabError(
                f"Axis {self.axis_index}: overall QSR {self.overall} disagrees with quadrants {self.quadrants}"
            )

    @property
    def quadrants(self) -> tuple[float, float, float, float]:
        return (self.q_st, self.q_sbar_tbar, self.q_s_tbar, self.q_sbar_t)

    @property
    def annotations(self) -> dict[str, str]:
        """Quadrants whose value is a forced +/-1: 'singleton' or 'empty'."""
        notes: dict[str, str] = {}
        for name, cells in zip(self.QUADRANTS, self.quadrant_cells, strict=True):
            if cells == 0:
                notes[name] = "empty"
            elif cells == 1:
                notes[name] = "singleton"
        return notes

    def as_report_row(self) -> tuple[float, float, float, float, float]:
        """Columns quadrant1, quadrant3, quadrant2, quadrant4, all, as in the qsr.csv report table."""
        return (self.q_st, self.q_sbar_tbar, self.q_sbar_t, self.q_s_tbar, self.overall)

    def satisfies_sign_lemma(self, tol: float = 1e-10) -> bool:
        """overall == 1 exactly when every quadrant has magnitude 1."""
        all_pure = all(abs(abs(q) - 1.0) <= tol for q in self.quadrants)
        is_one = abs(self.overall - 1.0) <= tol
        return all_pure == is_one


@dataclass(frozen=True)
class Recommendation:
    verdict: Verdict
    margin: float
    axes_considered: int = 2


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def validate_table(
    raw: Sequence[Sequence[float]] | Matrix,
    row_labels: Sequence[str],
    col_labels: Sequence[str],
    name: str = "",
) -> ContingencyTable:
    """Validate a raw grid plus labels into a ContingencyTable.

    Raises:
        ShapeMismatchError: If the grid is not rectangular or labels do not fit
        TooSmallError: If I < 2 or J < 2
        NegativeEntryError: If any entry is negative
        AllZeroError: If no entry is positive
        DuplicateLabelError: If a row or column label repeats
    """
    return ContingencyTable.from_rows(raw, row_labels=row_labels, col_labels=col_labels, name=name)


def correspondence(table: ContingencyTable) -> CorrespondenceMatrix:
    """Divide the table by its grand total and compute row and column masses."""
    counts = table.values
    total = float(counts.sum())
    p = counts / total
    return CorrespondenceMatrix(
        p=frozen_array(p),
        row_masses=frozen_array(p.sum(axis=1)),
        col_masses=frozen_array(p.sum(axis=0)),
        total=total,
        counts=counts,
    )


__all__ = [
    "AxisResult",
    "ContingencyTable",
    "CorrespondenceMatrix",
    "Decomposition",
    "Matrix",
    "Method",
    "Origin",
    "QsrRecord",
    "Recommendation",
    "ResidualMatrix",
    "SearchStrategy",
    "TableRef",
    "Vector",
    "Verdict",
    "correspondence",
    "frozen_array",
    "sign",
    "synthetic_labels",
    "validate_sign_vector",
    "validate_table",
]
