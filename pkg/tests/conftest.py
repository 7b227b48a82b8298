"""Pytest configuration and fixtures for taxicab-qsr tests."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from taxicab_qsr.taxicab.centering import center_tca, center_tlra, double_center
from taxicab_qsr.taxicab.tsvd import SearchConfig, decompose
from taxicab_qsr.taxicab.types import (
    ContingencyTable,
    Decomposition,
    Method,
    Origin,
    ResidualMatrix,
    TableRef,
    correspondence,
)

DATA_DIR = Path(__file__).parent / "data"

DEMOCA_ROWS = ("16-24", "25-34", "35-44", "45-54", "55-64", "65-74", "75+")
DEMOCA_COLS = ("Bad", "Average", "Good", "VeryGood")
DEMOCA_VALUES = [
    [69, 49, 48, 41],
    [148, 45, 14, 22],
    [170, 65, 12, 29],
    [159, 57, 12, 28],
    [122, 26, 6, 18],
    [106, 21, 5, 23],
    [40, 7, 1, 14],
]


@pytest.fixture
def democa_table() -> ContingencyTable:
    """The 7x4 age by rating count table."""
    return ContingencyTable.from_rows(DEMOCA_VALUES, DEMOCA_ROWS, DEMOCA_COLS, name="democa")


@pytest.fixture
def democa_csv() -> Path:
    """Path to the bundled demoCA CSV file."""
    return DATA_DIR / "democa.csv"


def _decompose_democa(method: Method, max_axes: int) -> Decomposition:
    table = ContingencyTable.from_rows(DEMOCA_VALUES, DEMOCA_ROWS, DEMOCA_COLS, name="democa")
    p = correspondence(table)
    x = center_tca(p) if method is Method.TCA else center_tlra(p, table)
    return decompose(x, SearchConfig(max_axes=max_axes), method=method, table_ref=TableRef.of(table))


@pytest.fixture(scope="session")
def tca_decomposition() -> Decomposition:
    """Two-axis exhaustive TCA decomposition of demoCA."""
    return _decompose_democa(Method.TCA, 2)


@pytest.fixture(scope="session")
def tlra_decomposition() -> Decomposition:
    """Two-axis exhaustive TLRA decomposition of demoCA."""
    return _decompose_democa(Method.TLRA, 2)


@pytest.fixture
def random_residual() -> Callable[[np.random.Generator, int, int], ResidualMatrix]:
    """Factory for random double-centered matrices."""

    def make(rng: np.random.Generator, n_rows: int, n_cols: int) -> ResidualMatrix:
        return ResidualMatrix(x=double_center(rng.standard_normal((n_rows, n_cols))), origin=Origin.TCA_CENTERED)

    return make


def write_csv(path: Path, header: list[str], rows: list[list[object]]) -> Path:
    """Write a small CSV file for ingestion tests."""
    lines = [",".join(header)] + [",".join(str(cell) for cell in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
