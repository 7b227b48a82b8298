"""Principal scores for symmetric maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import COL_LABEL_PREFIX, ROW_LABEL_PREFIX
from .errors import AxisOutOfRangeError, ZeroMassError
from .types import CorrespondenceMatrix, Decomposition, Matrix, Method, synthetic_labels


@dataclass(frozen=True, eq=False)
class PrincipalScores:
    """Row scores f (I x A) and column scores g (J x A) for the retained axes."""

    f: Matrix
    g: Matrix
    method: Method
    deltas: tuple[float, ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @property
    def n_axes(self) -> int:
        return int(self.f.shape[1])


@dataclass(frozen=True, eq=False)
class MapCoordinates:
    """Row and column points of a symmetric map for one pair of axes."""

    row_points: Matrix
    col_points: Matrix
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    axis_pair: tuple[int, int]
    method: Method


def principal_scores(dec: Decomposition, p: CorrespondenceMatrix) -> PrincipalScores:
    """TCA: f = a / p_i*, g = b / p_*j.  TLRA: f = I a, g = J b.

    Raises:
        ZeroMassError: If a TCA row or column mass is zero
    """
    n_rows, n_cols = p.p.shape
    a = np.column_stack([axis.a for axis in dec.axes]) if dec.axes else np.zeros((n_rows, 0))
    b = np.column_stack([axis.b for axis in dec.axes]) if dec.axes else np.zeros((n_cols, 0))

    if dec.method is Method.TCA:
        for axis_name, masses in (("row", p.row_masses), ("column", p.col_masses)):
            empty = np.flatnonzero(masses <= 0)
            if empty.size:
                raise ZeroMassError(axis_name, int(empty[0]))
        f = a / p.row_masses[:, np.newaxis]
        g = b / p.col_masses[:, np.newaxis]
    else:
        f = n_rows * a
        g = n_cols * b

    ref = dec.table_ref
    return PrincipalScores(
        f=f,
        g=g,
        method=dec.method,
        deltas=dec.deltas,
        row_labels=ref.row_labels if ref else synthetic_labels(ROW_LABEL_PREFIX, n_rows),
        col_labels=ref.col_labels if ref else synthetic_labels(COL_LABEL_PREFIX, n_cols),
    )


def map_coordinates(scores: PrincipalScores, axis_pair: tuple[int, int] = (1, 2)) -> MapCoordinates:
    """Points (f_alpha, f_beta) for rows and (g_alpha, g_beta) for columns; axes are 1-based.

    Raises:
        AxisOutOfRangeError: If alpha == beta or either axis is not retained
    """
    alpha, beta = axis_pair
    n_axes = scores.n_axes
    if alpha == beta or not (1 <= alpha <= n_axes and 1 <= beta <= n_axes):
        raise AxisOutOfRangeError(axis_pair, n_axes)
    columns = [alpha - 1, beta - 1]
    return MapCoordinates(
        row_points=scores.f[:, columns],
        col_points=scores.g[:, columns],
        row_labels=scores.row_labels,
        col_labels=scores.col_labels,
        axis_pair=(alpha, beta),
        method=scores.method,
    )
