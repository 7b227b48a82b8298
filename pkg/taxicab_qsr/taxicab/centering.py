"""Step 1 of both pipelines: multiplicative (TCA) and log bi-additive (TLRA) double-centering."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..common.logger import get_logger
from .errors import NonPositiveConstantError, ZeroCellError
from .types import (
    ContingencyTable,
    CorrespondenceMatrix,
    Matrix,
    Method,
    Origin,
    ResidualMatrix,
    Vector,
    frozen_array,
)

logger = get_logger(__name__)


def double_center(g: npt.ArrayLike) -> Matrix:
    """Remove row, column and grand means: g_ij - g_i* - g_*j + g_**."""
    g = np.asarray(g, dtype=np.float64)
    row_means = g.mean(axis=1, keepdims=True)
    col_means = g.mean(axis=0, keepdims=True)
    return g - row_means - col_means + g.mean()


@dataclass(frozen=True, eq=False)
class LogTable:
    """Log data G with its row, column and grand means."""

    g: Matrix
    row_means: Vector
    col_means: Vector
    grand_mean: float

    @classmethod
    def from_values(
        cls,
        values: npt.ArrayLike,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ) -> LogTable:
        """Take natural logs of strictly positive values.

        Raises:
            ZeroCellError: On the first cell that is not strictly positive
        """
        values = np.asarray(values, dtype=np.float64)
        zeros = np.argwhere(values <= 0)
        if zeros.size:
            i, j = (int(k) for k in zeros[0])
            raise ZeroCellError(
                i,
                j,
                row_labels[i] if row_labels is not None else None,
                col_labels[j] if col_labels is not None else None,
            )
        g = np.log(values)
        return cls(
            g=frozen_array(g),
            row_means=frozen_array(g.mean(axis=1)),
            col_means=frozen_array(g.mean(axis=0)),
            grand_mean=float(g.mean()),
        )

    def residuals(self) -> Matrix:
        return self.g - self.row_means[:, np.newaxis] - self.col_means[np.newaxis, :] + self.grand_mean


def center_tca(p: CorrespondenceMatrix) -> ResidualMatrix:
    """X_1(i, j) = p_ij - p_i* p_*j."""
    x = p.p - np.outer(p.row_masses, p.col_masses)
    return ResidualMatrix(x=x, origin=Origin.TCA_CENTERED, step=1)


def center_tlra(p: CorrespondenceMatrix, table: ContingencyTable | None = None) -> ResidualMatrix:
    """X_1(i, j) = G_ij - G_i* - G_*j + G_** with G = log p.

    The -log t term cancels under double-centering, so the logs are taken of the
    source counts. Pass the table to get labelled ZeroCellError messages.

    Raises:
        ZeroCellError: If any cell is zero (apply add_pseudocount first)
    """
    logs = LogTable.from_values(
        p.counts,
        row_labels=table.row_labels if table is not None else None,
        col_labels=table.col_labels if table is not None else None,
    )
    return ResidualMatrix(x=logs.residuals(), origin=Origin.TLRA_CENTERED, step=1)


def center(p: CorrespondenceMatrix, method: Method, table: ContingencyTable | None = None) -> ResidualMatrix:
    """Dispatch to the centering of the given method."""
    if method is Method.TCA:
        return center_tca(p)
    return center_tlra(p, table)


def add_pseudocount(table: ContingencyTable, c: float = 1.0) -> ContingencyTable:
    """Add c to every cell (Tukey's +1 for sparse tables).

    Raises:
        NonPositiveConstantError: If c <= 0
    """
    if not c > 0:
        raise NonPositiveConstantError(c)
    zero_cells = int(np.count_nonzero(table.values == 0))
    logger.debug(f"-> Adding pseudocount {c} to {table.values.size} cells ({zero_cells} zero)")
    return ContingencyTable(
        values=table.values + c,
        row_labels=table.row_labels,
        col_labels=table.col_labels,
        name=table.name,
    )
