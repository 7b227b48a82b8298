"""CSV table ingestion and machine-readable analysis reports (JSON document or CSV directory)."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import yaml

from .. import __version__
from ..common.logger import get_logger
from .config import COL_LABEL_PREFIX, CSV_TABLE_FILES, MANIFEST_FILENAME, ROW_LABEL_PREFIX
from .errors import CsvParseError, NonNumericCellError, RaggedRowsError, ReportIoError
from .qsr import Partition, partition_labels
from .scores import PrincipalScores
from .types import (
    ContingencyTable,
    Decomposition,
    QsrRecord,
    Recommendation,
    Verdict,
    synthetic_labels,
    validate_table,
)

logger = get_logger(__name__)

_PARSER_LINE = re.compile(r"line (\d+)")


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


# ---------------------------------------------------------------------------
# Table ingestion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CsvOptions:
    """How to read a table file; has_header follows has_row_labels unless set."""

    has_row_labels: bool = True
    delimiter: str = ","
    has_header: bool | None = None
    encoding: str = "utf-8"

    @property
    def header(self) -> bool:
        return self.has_row_labels if self.has_header is None else self.has_header


def read_table_csv(path: str | Path, options: CsvOptions | None = None) -> ContingencyTable:
    """Read a labelled grid of nonnegative numbers into a ContingencyTable.

    The first row holds column labels and the first column row labels (its
    header cell is ignored). Missing labels become R1..RI / C1..CJ. The table
    is named after the file stem.

    Raises:
        FileNotFoundError: If path does not exist
        RaggedRowsError: If rows have different numbers of fields
        NonNumericCellError: If a data cell is not a number
    """
    options = options or CsvOptions()
    path = Path(path)
    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            sep=options.delimiter,
            encoding=options.encoding,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.ParserError as exc:
        match = _PARSER_LINE.search(str(exc))
        raise RaggedRowsError("Rows have different numbers of fields", line=int(match.group(1)) if match else None) from None
    except pd.errors.EmptyDataError:
        raise CsvParseError(f"{path} is empty") from None
    except UnicodeDecodeError as exc:
        raise CsvParseError(f"{path} is not valid {options.encoding}: {exc.reason}") from None

    short = np.argwhere(frame.isna().to_numpy())
    if short.size:
        raise RaggedRowsError("Row is shorter than the first row", line=int(short[0][0]) + 1)

    grid = frame.to_numpy(dtype=object)
    header_rows = 1 if options.header else 0
    label_cols = 1 if options.has_row_labels else 0
    data = grid[header_rows:]
    if data.shape[0] == 0:
        raise CsvParseError(f"{path} has no data rows")

    n_rows, n_cols = data.shape[0], data.shape[1] - label_cols
    col_labels = (
        tuple(str(label).strip() for label in grid[0, label_cols:])
        if options.header
        else synthetic_labels(COL_LABEL_PREFIX, n_cols)
    )
    row_labels = (
        tuple(str(label).strip() for label in data[:, 0])
        if options.has_row_labels
        else synthetic_labels(ROW_LABEL_PREFIX, n_rows)
    )

    cells = pd.DataFrame(data[:, label_cols:])
    numeric = cells.apply(lambda column: pd.to_numeric(column.astype(str).str.strip(), errors="coerce"))
    bad = np.argwhere(numeric.isna().to_numpy())
    if bad.size:
        i, j = (int(k) for k in bad[0])
        raise NonNumericCellError(
            f"Cell value '{cells.iat[i, j]}' is not a number",
            line=i + header_rows + 1,
            col=j + label_cols + 1,
        )

    logger.debug(f"-> Read {n_rows}x{n_cols} table from {path}")
    return validate_table(numeric.to_numpy(dtype=np.float64), row_labels, col_labels, name=path.stem)


# ---------------------------------------------------------------------------
# Analysis reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisReport:
    """Everything one run produces for one method, in serializable form."""

    dataset_name: str
    method: str
    search: str
    deltas: tuple[float, ...]
    qsr: tuple[QsrRecord, ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    row_scores: tuple[tuple[float, ...], ...]
    col_scores: tuple[tuple[float, ...], ...]
    partitions: tuple[Partition, ...]
    recommendation: Recommendation | None = None
    software_version: str = __version__
    rng_seed: int | None = None

    @property
    def n_axes(self) -> int:
        return len(self.deltas)


def build_report(
    dataset_name: str,
    dec: Decomposition,
    qsr: list[QsrRecord],
    scores: PrincipalScores,
    recommendation: Recommendation | None = None,
    rng_seed: int | None = None,
) -> AnalysisReport:
    """Collect a finished decomposition into an AnalysisReport."""
    return AnalysisReport(
        dataset_name=dataset_name,
        method=dec.method.value,
        search=dec.search.value,
        deltas=tuple(float(delta) for delta in dec.deltas),
        qsr=tuple(qsr),
        row_labels=scores.row_labels,
        col_labels=scores.col_labels,
        row_scores=tuple(tuple(float(value) for value in row) for row in scores.f),
        col_scores=tuple(tuple(float(value) for value in row) for row in scores.g),
        partitions=tuple(partition_labels(axis, dec.table_ref) for axis in dec.axes),
        recommendation=recommendation,
        rng_seed=rng_seed,
    )


def _qsr_to_dict(record: QsrRecord) -> dict[str, Any]:
    return {
        "q_st": record.q_st,
        "q_sbar_tbar": record.q_sbar_tbar,
        "q_s_tbar": record.q_s_tbar,
        "q_sbar_t": record.q_sbar_t,
        "overall": record.overall,
        "cells": list(record.quadrant_cells),
    }


def _partition_to_dict(partition: Partition) -> dict[str, list[str]]:
    return {
        "rows_positive": list(partition.rows_positive),
        "rows_negative": list(partition.rows_negative),
        "cols_positive": list(partition.cols_positive),
        "cols_negative": list(partition.cols_negative),
    }


def _partition_from_dict(axis_index: int, raw: dict[str, list[str]]) -> Partition:
    return Partition(
        axis_index=axis_index,
        rows_positive=tuple(raw["rows_positive"]),
        rows_negative=tuple(raw["rows_negative"]),
        cols_positive=tuple(raw["cols_positive"]),
        cols_negative=tuple(raw["cols_negative"]),
    )


def _recommendation_to_dict(recommendation: Recommendation | None) -> dict[str, Any] | None:
    if recommendation is None:
        return None
    return {
        "verdict": recommendation.verdict.value,
        "margin": recommendation.margin,
        "axes_considered": recommendation.axes_considered,
    }


def _recommendation_from_dict(raw: dict[str, Any] | None) -> Recommendation | None:
    if raw is None:
        return None
    return Recommendation(
        verdict=Verdict(raw["verdict"]),
        margin=float(raw["margin"]),
        axes_considered=int(raw["axes_considered"]),
    )


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    """JSON document with a fixed key order."""
    axes = []
    for alpha, (delta, record, partition) in enumerate(
        zip(report.deltas, report.qsr, report.partitions, strict=True)
    ):
        axes.append(
            {
                "axis": record.axis_index,
                "delta": delta,
                "qsr": _qsr_to_dict(record),
                "partition": _partition_to_dict(partition),
                "row_scores": {label: row[alpha] for label, row in zip(report.row_labels, report.row_scores, strict=True)},
                "col_scores": {label: row[alpha] for label, row in zip(report.col_labels, report.col_scores, strict=True)},
            }
        )
    return {
        "dataset": report.dataset_name,
        "method": report.method,
        "search": report.search,
        "software_version": report.software_version,
        "rng_seed": report.rng_seed,
        "row_labels": list(report.row_labels),
        "col_labels": list(report.col_labels),
        "axes": axes,
        "recommendation": _recommendation_to_dict(report.recommendation),
    }


def report_from_dict(raw: dict[str, Any]) -> AnalysisReport:
    row_labels = tuple(raw["row_labels"])
    col_labels = tuple(raw["col_labels"])
    axes = raw["axes"]
    qsr = tuple(
        QsrRecord(
            axis_index=int(axis["axis"]),
            q_st=float(axis["qsr"]["q_st"]),
            q_sbar_tbar=float(axis["qsr"]["q_sbar_tbar"]),
            q_s_tbar=float(axis["qsr"]["q_s_tbar"]),
            q_sbar_t=float(axis["qsr"]["q_sbar_t"]),
            overall=float(axis["qsr"]["overall"]),
            delta=float(axis["delta"]),
            quadrant_cells=tuple(int(n) for n in axis["qsr"]["cells"]),  # type: ignore[arg-type]
        )
        for axis in axes
    )
    return AnalysisReport(
        dataset_name=raw["dataset"],
        method=raw["method"],
        search=raw["search"],
        deltas=tuple(float(axis["delta"]) for axis in axes),
        qsr=qsr,
        row_labels=row_labels,
        col_labels=col_labels,
        row_scores=tuple(tuple(float(axis["row_scores"][label]) for axis in axes) for label in row_labels),
        col_scores=tuple(tuple(float(axis["col_scores"][label]) for axis in axes) for label in col_labels),
        partitions=tuple(_partition_from_dict(int(axis["axis"]), axis["partition"]) for axis in axes),
        recommendation=_recommendation_from_dict(raw["recommendation"]),
        software_version=raw["software_version"],
        rng_seed=raw["rng_seed"],
    )


def _score_frame(labels: tuple[str, ...], scores: tuple[tuple[float, ...], ...], n_axes: int) -> pd.DataFrame:
    frame = pd.DataFrame(
        [list(row) for row in scores] if n_axes else [[] for _ in labels],
        columns=[f"axis{alpha}" for alpha in range(1, n_axes + 1)],
    )
    frame.insert(0, "label", list(labels))
    return frame


def _write_csv_tables(report: AnalysisReport, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    axis_ids = [record.axis_index for record in report.qsr]
    tables = {
        "deltas": pd.DataFrame({"axis": axis_ids, "delta": list(report.deltas)}),
        "qsr": pd.DataFrame(
            {
                "axis": axis_ids,
                "quadrant1": [r.q_st for r in report.qsr],
                "quadrant3": [r.q_sbar_tbar for r in report.qsr],
                "quadrant2": [r.q_sbar_t for r in report.qsr],
                "quadrant4": [r.q_s_tbar for r in report.qsr],
                "all": [r.overall for r in report.qsr],
                "cells_st": [r.quadrant_cells[0] for r in report.qsr],
                "cells_sbar_tbar": [r.quadrant_cells[1] for r in report.qsr],
                "cells_s_tbar": [r.quadrant_cells[2] for r in report.qsr],
                "cells_sbar_t": [r.quadrant_cells[3] for r in report.qsr],
            }
        ),
        "row_scores": _score_frame(report.row_labels, report.row_scores, report.n_axes),
        "col_scores": _score_frame(report.col_labels, report.col_scores, report.n_axes),
    }
    for key, frame in tables.items():
        frame.to_csv(directory / CSV_TABLE_FILES[key], index=False, float_format="%.17g", lineterminator="\n")

    manifest = {
        "dataset": report.dataset_name,
        "method": report.method,
        "search": report.search,
        "software_version": report.software_version,
        "rng_seed": report.rng_seed,
        "n_axes": report.n_axes,
        "tables": dict(CSV_TABLE_FILES),
        "partitions": [_partition_to_dict(partition) for partition in report.partitions],
        "recommendation": _recommendation_to_dict(report.recommendation),
    }
    with (directory / MANIFEST_FILENAME).open("w", encoding="utf-8") as handle:
        yaml.safe_dump(manifest, handle, sort_keys=False, allow_unicode=True)


def _read_frame(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip", keep_default_na=False, dtype={"label": str})


def _read_csv_tables(directory: Path) -> AnalysisReport:
    with (directory / MANIFEST_FILENAME).open(encoding="utf-8") as handle:
        manifest = yaml.safe_load(handle)
    if not isinstance(manifest, dict):
        raise ValueError(f"Expected a mapping in {MANIFEST_FILENAME}")

    files = manifest["tables"]
    deltas = _read_frame(directory / files["deltas"])
    qsr_frame = _read_frame(directory / files["qsr"])
    row_frame = _read_frame(directory / files["row_scores"])
    col_frame = _read_frame(directory / files["col_scores"])
    axis_columns = [f"axis{alpha}" for alpha in range(1, int(manifest["n_axes"]) + 1)]

    qsr = tuple(
        QsrRecord(
            axis_index=int(row["axis"]),
            q_st=float(row["quadrant1"]),
            q_sbar_tbar=float(row["quadrant3"]),
            q_s_tbar=float(row["quadrant4"]),
            q_sbar_t=float(row["quadrant2"]),
            overall=float(row["all"]),
            delta=float(delta),
            quadrant_cells=(
                int(row["cells_st"]),
                int(row["cells_sbar_tbar"]),
                int(row["cells_s_tbar"]),
                int(row["cells_sbar_t"]),
            ),
        )
        for (_, row), delta in zip(qsr_frame.iterrows(), deltas["delta"], strict=True)
    )
    return AnalysisReport(
        dataset_name=manifest["dataset"],
        method=manifest["method"],
        search=manifest["search"],
        deltas=tuple(float(delta) for delta in deltas["delta"]),
        qsr=qsr,
        row_labels=tuple(row_frame["label"]),
        col_labels=tuple(col_frame["label"]),
        row_scores=tuple(tuple(float(v) for v in row) for row in row_frame[axis_columns].to_numpy()),
        col_scores=tuple(tuple(float(v) for v in row) for row in col_frame[axis_columns].to_numpy()),
        partitions=tuple(
            _partition_from_dict(record.axis_index, raw)
            for record, raw in zip(qsr, manifest["partitions"], strict=True)
        ),
        recommendation=_recommendation_from_dict(manifest["recommendation"]),
        software_version=manifest["software_version"],
        rng_seed=manifest["rng_seed"],
    )


def write_report(report: AnalysisReport, fmt: ReportFormat | str, path: str | Path) -> None:
    """Write a report as one JSON file, or as a CSV directory with a YAML manifest.

    Raises:
        ReportIoError: If the destination cannot be written
    """
    fmt = ReportFormat(fmt)
    path = Path(path)
    try:
        if fmt is ReportFormat.JSON:
            path.parent.mkdir(parents=True, exist_ok=True)
            text = json.dumps(report_to_dict(report), indent=2, ensure_ascii=False)
            path.write_text(text + "\n", encoding="utf-8")
        else:
            _write_csv_tables(report, path)
    except OSError as exc:
        raise ReportIoError(str(path), exc.strerror or str(exc)) from None
    logger.debug(f"-> Wrote {fmt.value} report to {path}")


def read_report(path: str | Path, fmt: ReportFormat | str | None = None) -> AnalysisReport:
    """Inverse of write_report; the format defaults to CSV for directories and JSON otherwise.

    Raises:
        ReportIoError: If the report is missing or malformed
    """
    path = Path(path)
    fmt = ReportFormat(fmt) if fmt is not None else (ReportFormat.CSV if path.is_dir() else ReportFormat.JSON)
    try:
        if fmt is ReportFormat.JSON:
            return report_from_dict(json.loads(path.read_text(encoding="utf-8")))
        return _read_csv_tables(path)
    except OSError as exc:
        raise ReportIoError(str(path), exc.strerror or str(exc)) from None
    except (KeyError, TypeError, ValueError, yaml.YAMLError) as exc:
        raise ReportIoError(str(path), f"malformed report ({exc})") from None
