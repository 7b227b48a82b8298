"""Tests for taxicab_qsr.taxicab.types domain types and validation."""

import numpy as np
import pytest

from taxicab_qsr.taxicab.errors import (
    AllZeroError,
    DimensionMismatchError,
    DuplicateLabelError,
    NegativeEntryError,
    NotDoubleCenteredError,
    ShapeMismatchError,
    TaxicabError,
    TooSmallError,
)
from taxicab_qsr.taxicab.types import (
    AxisResult,
    ContingencyTable,
    Origin,
    QsrRecord,
    ResidualMatrix,
    correspondence,
    sign,
    validate_sign_vector,
    validate_table,
)


class TestValidateTable:
    """Test suite for validate_table."""

    def test_democa_is_valid(self, democa_table):
        """The 7x4 demoCA table validates with its labels."""
        table = validate_table(democa_table.values, democa_table.row_labels, democa_table.col_labels)

        assert (table.n_rows, table.n_cols) == (7, 4)
        assert table.rank_bound == 3
        assert table == democa_table

    def test_all_zero_rejected(self):
        """A table without a positive entry is rejected."""
        with pytest.raises(AllZeroError):
            validate_table([[0, 0], [0, 0]], ["a", "b"], ["x", "y"])

    def test_negative_entry_rejected(self):
        """A negative entry is reported with its cell."""
        with pytest.raises(NegativeEntryError) as exc_info:
            validate_table([[1, 2, 3], [4, -1, 6], [7, 8, 9]], ["a", "b", "c"], ["x", "y", "z"])

        assert (exc_info.value.i, exc_info.value.j) == (1, 1)

    def test_too_small_rejected(self):
        """Tables need at least two rows and two columns."""
        with pytest.raises(TooSmallError):
            validate_table([[1, 2, 3]], ["a"], ["x", "y", "z"])

    def test_duplicate_label_rejected(self):
        """Row labels must be unique."""
        with pytest.raises(DuplicateLabelError) as exc_info:
            validate_table([[1, 2], [3, 4]], ["a", "a"], ["x", "y"])

        assert exc_info.value.name == "a"

    def test_ragged_rows_rejected(self):
        """Rows of different length are a shape error."""
        with pytest.raises(ShapeMismatchError):
            validate_table([[1, 2], [3]], ["a", "b"], ["x", "y"])

    def test_label_count_mismatch_rejected(self):
        """Label counts must match the grid."""
        with pytest.raises(ShapeMismatchError):
            validate_table([[1, 2], [3, 4]], ["a", "b", "c"], ["x", "y"])

    def test_synthetic_labels(self):
        """Unlabelled input gets R1..RI and C1..CJ."""
        table = ContingencyTable.from_rows([[1, 2, 3], [4, 5, 6]])

        assert table.row_labels == ("R1", "R2")
        assert table.col_labels == ("C1", "C2", "C3")

    def test_values_are_read_only(self, democa_table):
        """Tables are immutable after construction."""
        with pytest.raises(ValueError):
            democa_table.values[0, 0] = 1.0


class TestCorrespondence:
    """Test suite for correspondence."""

    def test_democa_total_and_mass(self, democa_table):
        """t = 1357 and the first row mass is 207/1357."""
        p = correspondence(democa_table)

        assert p.total == 1357
        assert p.row_masses[0] == pytest.approx(207 / 1357, abs=1e-15)
        assert p.p.sum() == pytest.approx(1.0, abs=1e-12)
        assert p.col_masses.sum() == pytest.approx(1.0, abs=1e-12)

    def test_uniform_table(self):
        """A 2x2 all-ones table has p = 0.25 and masses 0.5."""
        p = correspondence(ContingencyTable.from_rows([[1, 1], [1, 1]]))

        np.testing.assert_array_equal(p.p, np.full((2, 2), 0.25))
        np.testing.assert_array_equal(p.row_masses, [0.5, 0.5])
        np.testing.assert_array_equal(p.col_masses, [0.5, 0.5])


class TestSigns:
    """Test suite for the sign convention and sign vectors."""

    def test_sign_of_zero_is_negative(self):
        """sign(0) = -1."""
        np.testing.assert_array_equal(sign([2.0, 0.0, -3.0]), [1.0, -1.0, -1.0])

    def test_validate_sign_vector_length(self):
        """Length mismatch raises DimensionMismatchError."""
        with pytest.raises(DimensionMismatchError):
            validate_sign_vector([1, -1], 3)

    def test_validate_sign_vector_entries(self):
        """Zero entries are not signs."""
        with pytest.raises(ValueError):
            validate_sign_vector([1, 0, -1], 3)


class TestResidualMatrix:
    """Test suite for ResidualMatrix."""

    def test_rejects_uncentered(self):
        """A matrix with non-zero row sums is rejected."""
        with pytest.raises(NotDoubleCenteredError):
            ResidualMatrix(x=np.array([[1.0, 0.0], [0.0, 0.0]]), origin=Origin.TCA_CENTERED)

    def test_total_abs(self):
        """total_abs is the entrywise L1 norm."""
        x = ResidualMatrix(x=np.array([[1.0, -1.0], [-1.0, 1.0]]), origin=Origin.DEFLATED, step=2)

        assert x.total_abs == 4.0
        assert x.shape == (2, 2)


class TestAxisResult:
    """Test suite for AxisResult."""

    def test_partitions(self):
        """S and T are the indices with positive scores."""
        axis = AxisResult(
            u=[1, -1, -1], v=[-1, 1], a=[-2.0, 2.0], b=[3.0, -1.0, -2.0], delta=4.0, axis_index=1
        )

        assert axis.row_partition == (1,)
        assert axis.col_partition == (0,)

    def test_rejects_bad_sign_vector(self):
        """u must be a sign vector matching b."""
        with pytest.raises(DimensionMismatchError):
            AxisResult(u=[1, -1], v=[1, -1], a=[1.0, -1.0], b=[1.0, -1.0, 0.0], delta=2.0, axis_index=1)


class TestQsrRecord:
    """Test suite for QsrRecord helpers."""

    def test_report_column_order(self):
        """as_report_row returns quadrant1, quadrant3, quadrant2, quadrant4, all."""
        record = QsrRecord(1, q_st=0.9, q_sbar_tbar=0.8, q_s_tbar=-0.7, q_sbar_t=-0.6, overall=0.5, delta=1.0)

        assert record.as_report_row() == (0.9, 0.8, -0.6, -0.7, 0.5)

    def test_annotations(self):
        """Singleton and empty quadrants are annotated."""
        record = QsrRecord(1, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, quadrant_cells=(4, 3, 1, 0))

        assert record.annotations == {"S x Tbar": "singleton", "Sbar x T": "empty"}

    def test_sign_lemma(self):
        """overall = 1 holds exactly when every quadrant is pure."""
        assert QsrRecord(1, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0).satisfies_sign_lemma()
        assert QsrRecord(1, 0.9, 1.0, -1.0, -1.0, 0.95, 1.0).satisfies_sign_lemma()

    @pytest.mark.parametrize(
        "values",
        [
            (0.0, 1.0, -1.0, -1.0, 0.9),
            (0.9, 1.2, -1.0, -1.0, 0.9),
            (0.9, 1.0, 0.1, -1.0, 0.9),
            (0.9, 1.0, -1.0, -1.5, 0.9),
            (0.9, 1.0, -1.0, -1.0, 0.0),
            (0.9, 1.0, -1.0, -1.0, 1.0),
            (1.0, 1.0, -1.0, -1.0, 0.8),
        ],
    )
    def test_rejects_inconsistent_values(self, values):
        """Quadrant ranges and the overall/purity equivalence are enforced at construction."""
        q_st, q_sbar_tbar, q_s_tbar, q_sbar_t, overall = values

        with pytest.raises(TaxicabError):
            QsrRecord(1, q_st, q_sbar_tbar, q_s_tbar, q_sbar_t, overall, 1.0)
