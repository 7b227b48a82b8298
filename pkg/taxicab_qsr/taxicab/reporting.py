"""Console tables for analysis runs: dispersions, QSR per quadrant and the method comparison."""

from __future__ import annotations

from collections.abc import Sequence

from ..common.logger import get_logger
from .config import SEPARATOR_LONG
from .qsr import Partition
from .types import QsrRecord, Recommendation, Verdict

logger = get_logger(__name__)


def _pct(value: float) -> str:
    return f"{100 * value:+8.2f}"


def print_dispersions(method: str, deltas: Sequence[float]) -> None:
    """Dispersion per axis, six decimals."""
    logger.info(f"\nDispersion ({method.upper()})")
    for alpha, delta in enumerate(deltas, start=1):
        logger.info(f"  axis {alpha}: {delta:.6f}")


def print_qsr_table(method: str, records: Sequence[QsrRecord], partitions: Sequence[Partition] = ()) -> None:
    """QSR in percent, columns in report order quadrant1, quadrant3, quadrant2, quadrant4, all."""
    logger.info(f"\nQSR % ({method.upper()})")
    logger.info(f"  {'axis':>4} {'S x T':>8} {'Sb x Tb':>8} {'Sb x T':>8} {'S x Tb':>8} {'all':>8}")
    for record in records:
        columns = " ".join(_pct(value) for value in record.as_report_row())
        notes = ", ".join(f"{name} {note}" for name, note in record.annotations.items())
        logger.info(f"  {record.axis_index:>4} {columns}" + (f"   ({notes})" if notes else ""))

    for partition in partitions:
        logger.info(
            f"  axis {partition.axis_index}: S = {{{', '.join(partition.rows_positive)}}}, "
            f"T = {{{', '.join(partition.cols_positive)}}}"
        )


def print_comparison(
    qsr_tca: Sequence[QsrRecord],
    qsr_tlra: Sequence[QsrRecord],
    recommendation: Recommendation,
) -> None:
    """Overall QSR of both centerings side by side, then the verdict."""
    logger.info(f"\n{SEPARATOR_LONG}")
    logger.info("METHOD COMPARISON (overall QSR %)")
    logger.info(SEPARATOR_LONG)
    logger.info(f"  {'axis':>4} {'TCA':>8} {'TLRA':>8}")
    for tca, tlra in zip(qsr_tca, qsr_tlra, strict=False):
        logger.info(f"  {tca.axis_index:>4} {100 * tca.overall:8.2f} {100 * tlra.overall:8.2f}")

    if recommendation.verdict is Verdict.INCONCLUSIVE:
        logger.warning(f"\n[WARN] {recommendation.verdict.value}: neither centering wins on every axis")
    else:
        logger.info(
            f"\n[OK] {recommendation.verdict.value} "
            f"(margin {recommendation.margin:.2f} pp over {recommendation.axes_considered} axes)"
        )
    logger.info(SEPARATOR_LONG)


def print_violations(method: str, problems: Sequence[str]) -> None:
    """Residual diagnostics that failed; the run still succeeds."""
    if not problems:
        logger.info(f"[OK] {method.upper()} residual identities hold")
        return
    for problem in problems:
        logger.warning(f"  [WARN] {method.upper()} {problem}")
