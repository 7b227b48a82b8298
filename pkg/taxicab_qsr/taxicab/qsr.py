"""Quality of the signs of the residuals (QSR), overall and per quadrant, and the method recommendation."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..common.logger import get_logger
from .config import COL_LABEL_PREFIX, ROW_LABEL_PREFIX
from .errors import MismatchedAxesError, ZeroResidualError
from .types import (
    AxisResult,
    Decomposition,
    QsrRecord,
    Recommendation,
    ResidualMatrix,
    TableRef,
    Verdict,
    synthetic_labels,
)

logger = get_logger(__name__)

# Gap in overall QSR under which neither method wins an axis
WIN_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    """Names of the categories on each side of an axis: S, S-bar (rows) and T, T-bar (columns)."""

    axis_index: int
    rows_positive: tuple[str, ...]
    rows_negative: tuple[str, ...]
    cols_positive: tuple[str, ...]
    cols_negative: tuple[str, ...]


def qsr_overall(x: ResidualMatrix, axis: AxisResult) -> float:
    """delta / sum |x_ij| for the residual matrix the axis was computed from.

    Raises:
        ZeroResidualError: If x is all zero
    """
    total = x.total_abs
    if total == 0.0:
        raise ZeroResidualError(f"QSR is undefined for the all-zero residual of axis {axis.axis_index}")
    return axis.delta / total


def _quadrant_masses(x: ResidualMatrix, axis: AxisResult) -> tuple[float, float, float, float]:
    """v(+/-)' |X| u(+/-) for S x T, Sbar x Tbar, S x Tbar, Sbar x T."""
    abs_x = np.abs(x.x)
    u_pos, u_neg = (axis.u + 1) / 2, (1 - axis.u) / 2
    v_pos, v_neg = (axis.v + 1) / 2, (1 - axis.v) / 2
    return (
        float(v_pos @ abs_x @ u_pos),
        float(v_neg @ abs_x @ u_neg),
        float(v_pos @ abs_x @ u_neg),
        float(v_neg @ abs_x @ u_pos),
    )


def qsr_quadrants(x: ResidualMatrix, axis: AxisResult) -> QsrRecord:
    """Signed QSR of the four quadrants induced by S = {i: a_i > 0} and T = {j: b_j > 0}.

    Each value is the signed sum of the quadrant over its absolute mass. A
    quadrant with no mass (empty, or all cells zero) is reported as +/-1.
    """
    overall = qsr_overall(x, axis)
    rows_pos, cols_pos = axis.v > 0, axis.u > 0
    blocks = (
        (rows_pos, cols_pos, 1.0),
        (~rows_pos, ~cols_pos, 1.0),
        (rows_pos, ~cols_pos, -1.0),
        (~rows_pos, cols_pos, -1.0),
    )
    masses = _quadrant_masses(x, axis)

    values: list[float] = []
    cells: list[int] = []
    for (rows, cols, expected_sign), mass in zip(blocks, masses, strict=True):
        block = x.x[np.ix_(rows, cols)]
        cells.append(int(block.size))
        if mass == 0.0:
            values.append(expected_sign)
            continue
        direct = float(block.sum()) / mass
        balanced = expected_sign * (axis.delta / 4) / mass
        if abs(direct - balanced) > 1e-8:
            logger.warning(
                f"  [WARN] Axis {axis.axis_index}: quadrant sum ratio {direct:.10f} "
                f"differs from balanced value {balanced:.10f}"
            )
        values.append(direct)

    return QsrRecord(
        axis_index=axis.axis_index,
        q_st=values[0],
        q_sbar_tbar=values[1],
        q_s_tbar=values[2],
        q_sbar_t=values[3],
        overall=overall,
        delta=axis.delta,
        quadrant_cells=(cells[0], cells[1], cells[2], cells[3]),
    )


def qsr_report(dec: Decomposition) -> list[QsrRecord]:
    """One QsrRecord per axis, from the residual snapshot stored for that axis."""
    if len(dec.residuals) != len(dec.axes):
        raise ZeroResidualError("Decomposition does not carry a residual snapshot for every axis")
    return [qsr_quadrants(x, axis) for x, axis in zip(dec.residuals, dec.axes, strict=True)]


def partition_labels(axis: AxisResult, table_ref: TableRef | None = None) -> Partition:
    """Category names on the positive and negative side of an axis."""
    n_rows, n_cols = axis.a.shape[0], axis.b.shape[0]
    row_labels = table_ref.row_labels if table_ref else synthetic_labels(ROW_LABEL_PREFIX, n_rows)
    col_labels = table_ref.col_labels if table_ref else synthetic_labels(COL_LABEL_PREFIX, n_cols)
    return Partition(
        axis_index=axis.axis_index,
        rows_positive=tuple(label for label, s in zip(row_labels, axis.v, strict=True) if s > 0),
        rows_negative=tuple(label for label, s in zip(row_labels, axis.v, strict=True) if s < 0),
        cols_positive=tuple(label for label, s in zip(col_labels, axis.u, strict=True) if s > 0),
        cols_negative=tuple(label for label, s in zip(col_labels, axis.u, strict=True) if s < 0),
    )


def recommend_method(
    qsr_tca: Sequence[QsrRecord],
    qsr_tlra: Sequence[QsrRecord],
    axes_considered: int = 2,
) -> Recommendation:
    """Prefer the centering whose overall QSR is higher on every leading axis.

    Only overall QSR is compared; dispersions of the two methods live on
    different scales and are never ranked. The margin is the mean gap in
    percentage points, 0 when the records coincide.

    Raises:
        MismatchedAxesError: If either list is shorter than axes_considered or the axes do not line up
    """
    if axes_considered < 1:
        raise MismatchedAxesError(f"axes_considered must be >= 1, got {axes_considered}")
    if len(qsr_tca) < axes_considered or len(qsr_tlra) < axes_considered:
        raise MismatchedAxesError(
            f"Need {axes_considered} axes from both methods, got {len(qsr_tca)} (TCA) and {len(qsr_tlra)} (TLRA)"
        )

    gaps: list[float] = []
    for tca, tlra in zip(qsr_tca[:axes_considered], qsr_tlra[:axes_considered], strict=True):
        if tca.axis_index != tlra.axis_index:
            raise MismatchedAxesError(f"Cannot compare axis {tca.axis_index} with axis {tlra.axis_index}")
        gaps.append(tlra.overall - tca.overall)

    margin = abs(float(np.mean(gaps))) * 100
    if all(gap > WIN_TOL for gap in gaps):
        verdict = Verdict.PREFER_TLRA
    elif all(gap < -WIN_TOL for gap in gaps):
        verdict = Verdict.PREFER_TCA
    else:
        verdict = Verdict.INCONCLUSIVE
        if all(abs(gap) <= WIN_TOL for gap in gaps):
            margin = 0.0
    return Recommendation(verdict=verdict, margin=margin, axes_considered=axes_considered)
