"""Tests for taxicab_qsr.taxicab.qsr quality-of-signs index and method recommendation."""

import numpy as np
import pytest

from taxicab_qsr.taxicab.centering import center_tca
from taxicab_qsr.taxicab.errors import MismatchedAxesError, TaxicabError, ZeroResidualError
from taxicab_qsr.taxicab.qsr import partition_labels, qsr_overall, qsr_quadrants, qsr_report, recommend_method
from taxicab_qsr.taxicab.tsvd import SearchConfig, decompose, search_exhaustive
from taxicab_qsr.taxicab.types import (
    AxisResult,
    Method,
    Origin,
    QsrRecord,
    ResidualMatrix,
    Verdict,
    correspondence,
)

PP = 1e-4  # 0.01 percentage points

PURE_SIGNS = np.array([[3.0, 1.0, -4.0], [1.0, 1.0, -2.0], [-4.0, -2.0, 6.0]])


def record(axis_index: int, overall: float) -> QsrRecord:
    return QsrRecord(axis_index, 0.9, 0.9, -0.9, -0.9, overall=overall, delta=1.0)


def quadrant_masses(x: ResidualMatrix, axis: AxisResult) -> list[float]:
    rows, cols = axis.v > 0, axis.u > 0
    return [
        float(np.abs(x.x[np.ix_(r, c)]).sum())
        for r, c in ((rows, cols), (~rows, ~cols), (rows, ~cols), (~rows, cols))
    ]


def assert_quadrants(rec: QsrRecord, positives: tuple[float, float], negatives: tuple[float, float]) -> None:
    """Compare quadrant values up to axis orientation: sorted positive and negative pairs."""
    assert sorted((rec.q_st, rec.q_sbar_tbar)) == pytest.approx(sorted(positives), abs=PP)
    assert sorted((rec.q_s_tbar, rec.q_sbar_t)) == pytest.approx(sorted(negatives), abs=PP)


class TestQsrOverall:
    """Test suite for qsr_overall."""

    def test_democa_tca(self, tca_decomposition):
        """TCA overall QSR is (81.43%, 86.79%)."""
        records = qsr_report(tca_decomposition)

        assert records[0].overall == pytest.approx(0.8143, abs=PP)
        assert records[1].overall == pytest.approx(0.8679, abs=PP)

    def test_democa_tlra(self, tlra_decomposition):
        """TLRA overall QSR is (87.69%, 94.90%)."""
        records = qsr_report(tlra_decomposition)

        assert records[0].overall == pytest.approx(0.8769, abs=PP)
        assert records[1].overall == pytest.approx(0.9490, abs=PP)

    def test_last_axis_is_one(self, democa_table):
        """The final axis of a full decomposition has QSR 1."""
        x = center_tca(correspondence(democa_table))
        dec = decompose(x, SearchConfig(max_axes=3))

        assert qsr_report(dec)[-1].overall == pytest.approx(1.0, abs=1e-10)

    def test_invariant_under_rescaling(self, random_residual):
        """Rescaling X by a positive constant leaves QSR unchanged."""
        x = random_residual(np.random.default_rng(3), 6, 5)
        scaled = ResidualMatrix(x=250.0 * x.x, origin=x.origin)

        assert qsr_overall(scaled, search_exhaustive(scaled)) == pytest.approx(
            qsr_overall(x, search_exhaustive(x)), rel=1e-12
        )

    def test_zero_residual_rejected(self):
        """QSR of an all-zero residual is undefined."""
        x = ResidualMatrix(x=np.zeros((2, 2)), origin=Origin.DEFLATED)
        axis = AxisResult(u=[1, -1], v=[1, -1], a=[0.0, 0.0], b=[0.0, 0.0], delta=0.0, axis_index=2)

        with pytest.raises(ZeroResidualError):
            qsr_overall(x, axis)


class TestQsrQuadrants:
    """Test suite for qsr_quadrants and qsr_report."""

    def test_democa_tca_axis_one(self, tca_decomposition):
        """Axis 1: the singleton (16-24, Bad) is -1, the other mixed quadrant -52.29%."""
        rec = qsr_report(tca_decomposition)[0]

        assert rec.q_st == pytest.approx(1.0, abs=1e-12)
        assert rec.q_sbar_tbar == pytest.approx(1.0, abs=1e-12)
        assert rec.q_s_tbar == pytest.approx(-1.0, abs=1e-12)
        assert rec.q_sbar_t == pytest.approx(-0.5229, abs=PP)
        assert rec.quadrant_cells == (3, 6, 1, 18)
        assert rec.annotations == {"S x Tbar": "singleton"}

    def test_democa_tca_axis_two(self, tca_decomposition):
        """Axis 2 quadrants are (+100, +83.74 / -100, -70.69)."""
        assert_quadrants(qsr_report(tca_decomposition)[1], (1.0, 0.8374), (-1.0, -0.7069))

    def test_democa_tlra(self, tlra_decomposition):
        """TLRA quadrants are (78.02, 88.43 / -100, -87.02) and (90.76, 99.44 / -99.44, -90.76)."""
        first, second = qsr_report(tlra_decomposition)

        assert_quadrants(first, (0.7802, 0.8843), (-1.0, -0.8702))
        assert_quadrants(second, (0.9076, 0.9944), (-0.9944, -0.9076))

    def test_report_column_order(self, tca_decomposition):
        """Report rows follow quadrant1, quadrant3, quadrant2, quadrant4, all."""
        rec = qsr_report(tca_decomposition)[0]

        assert rec.as_report_row() == (rec.q_st, rec.q_sbar_tbar, rec.q_sbar_t, rec.q_s_tbar, rec.overall)

    def test_two_formulas_agree(self, tca_decomposition, tlra_decomposition):
        """Signed-sum ratios equal +/-(delta/4) over the quadrant mass."""
        for dec in (tca_decomposition, tlra_decomposition):
            for x, axis, rec in zip(dec.residuals, dec.axes, qsr_report(dec), strict=True):
                masses = quadrant_masses(x, axis)
                balanced = [s * axis.delta / 4 / m for s, m in zip((1, 1, -1, -1), masses, strict=True)]

                assert list(rec.quadrants) == pytest.approx(balanced, abs=1e-10)

    def test_parts_add_up_to_delta(self, tlra_decomposition):
        """Quadrant magnitudes weighted by their masses sum to delta."""
        for x, axis, rec in zip(tlra_decomposition.residuals, tlra_decomposition.axes, qsr_report(tlra_decomposition), strict=True):
            total = sum(abs(q) * m for q, m in zip(rec.quadrants, quadrant_masses(x, axis), strict=True))

            assert total == pytest.approx(axis.delta, rel=1e-10)

    def test_pure_sign_quadrants(self):
        """One-signed quadrants give +/-1 everywhere and overall 1."""
        x = ResidualMatrix(x=PURE_SIGNS, origin=Origin.TCA_CENTERED)
        axis = search_exhaustive(x)

        rec = qsr_quadrants(x, axis)

        assert axis.delta == pytest.approx(24.0)
        assert rec.overall == pytest.approx(1.0)
        assert [abs(q) for q in rec.quadrants] == pytest.approx([1.0] * 4)
        assert rec.satisfies_sign_lemma()

    def test_sign_lemma_on_mixed_axis(self, tca_decomposition):
        """Overall below 1 goes with at least one impure quadrant."""
        rec = qsr_report(tca_decomposition)[0]

        assert rec.overall < 1
        assert rec.satisfies_sign_lemma()

    def test_axis_off_its_fixed_point_rejected(self):
        """Signs that do not follow the scores give zero-sum quadrants, which no record accepts."""
        x = ResidualMatrix(x=PURE_SIGNS, origin=Origin.TCA_CENTERED)
        axis = AxisResult(
            u=[1, 1, -1], v=[1, 1, 1], a=[8.0, 4.0, -12.0], b=[8.0, 4.0, -12.0], delta=24.0, axis_index=1
        )

        with pytest.raises(TaxicabError, match="S x T"):
            qsr_quadrants(x, axis)

    def test_rank_one_report(self):
        """A one-axis decomposition of a rank-1 matrix has QSR 1."""
        x = ResidualMatrix(x=np.outer([1.0, -2.0, 1.0], [2.0, -1.0, -1.0]), origin=Origin.TCA_CENTERED)
        records = qsr_report(decompose(x, SearchConfig(max_axes=2)))

        assert len(records) == 1
        assert records[0].overall == pytest.approx(1.0, abs=1e-10)


class TestPartitionLabels:
    """Test suite for partition_labels."""

    def test_democa_tca_axis_one(self, tca_decomposition):
        """16-24 is alone against the other ages; Bad against the other ratings."""
        partition = partition_labels(tca_decomposition.axes[0], tca_decomposition.table_ref)

        assert partition.rows_positive == ("16-24",)
        assert partition.cols_negative == ("Bad",)
        assert partition.cols_positive == ("Average", "Good", "VeryGood")
        assert len(partition.rows_negative) == 6

    def test_synthetic_labels_without_table(self):
        """Without provenance, rows and columns are named R1.. and C1..."""
        axis = AxisResult(u=[1, -1], v=[-1, 1], a=[-1.0, 1.0], b=[1.0, -1.0], delta=2.0, axis_index=1)

        partition = partition_labels(axis)

        assert partition.rows_positive == ("R2",)
        assert partition.cols_positive == ("C1",)


class TestRecommendMethod:
    """Test suite for recommend_method."""

    def test_democa_prefers_tlra(self, tca_decomposition, tlra_decomposition):
        """TLRA (87.69, 94.90) beats TCA (81.43, 86.79) by about 7.2 points."""
        result = recommend_method(qsr_report(tca_decomposition), qsr_report(tlra_decomposition))

        assert result.verdict is Verdict.PREFER_TLRA
        assert result.margin == pytest.approx(7.185, abs=0.02)
        assert result.axes_considered == 2

    def test_tca_preferred_when_higher_on_every_axis(self):
        """TCA (77.89, 56.40) against TLRA (68.69, 54.83)."""
        result = recommend_method([record(1, 0.7789), record(2, 0.5640)], [record(1, 0.6869), record(2, 0.5483)])

        assert result.verdict is Verdict.PREFER_TCA
        assert result.margin == pytest.approx(5.385, abs=1e-9)

    def test_identical_records_inconclusive(self):
        """Equal QSR gives Inconclusive with zero margin."""
        records = [record(1, 0.8), record(2, 0.7)]

        result = recommend_method(records, records)

        assert result.verdict is Verdict.INCONCLUSIVE
        assert result.margin == 0.0

    def test_split_decision_inconclusive(self):
        """Winning one axis and losing the other is Inconclusive."""
        result = recommend_method([record(1, 0.9), record(2, 0.5)], [record(1, 0.8), record(2, 0.7)])

        assert result.verdict is Verdict.INCONCLUSIVE
        assert result.margin == pytest.approx(5.0)

    def test_single_axis_comparison(self):
        """axes_considered limits the comparison to leading axes."""
        result = recommend_method([record(1, 0.9), record(2, 0.1)], [record(1, 0.8), record(2, 0.9)], axes_considered=1)

        assert result.verdict is Verdict.PREFER_TCA

    def test_too_few_axes_rejected(self):
        """Both lists must cover the compared axes."""
        with pytest.raises(MismatchedAxesError):
            recommend_method([record(1, 0.9)], [record(1, 0.8), record(2, 0.7)])

    def test_misaligned_axes_rejected(self):
        """Records are compared axis by axis."""
        with pytest.raises(MismatchedAxesError):
            recommend_method([record(1, 0.9), record(2, 0.8)], [record(2, 0.8), record(1, 0.7)])


class TestMethodTags:
    """Test suite for decomposition provenance used by the reports."""

    def test_methods(self, tca_decomposition, tlra_decomposition):
        """Each decomposition carries its method and table."""
        assert tca_decomposition.method is Method.TCA
        assert tlra_decomposition.method is Method.TLRA
        assert tca_decomposition.table_ref.row_labels[0] == "16-24"
