#!/usr/bin/env python3
"""
Taxicab analysis of a contingency table or compositional data file.

Pipeline per centering method:
  1. Center the data (TCA: p_ij - p_i* p_*j, TLRA: double-centered log counts)
  2. Taxicab SVD by exhaustive, criss-cross or genetic search with deflation
  3. QSR per axis and quadrant, principal scores, reports and maps

Subcommands:
  analyze  write JSON or CSV reports; with --method both, recommend a centering
  map      write an SVG symmetric map for one pair of axes

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from taxicab_qsr.common.logger import get_logger
from taxicab_qsr.taxicab.centering import add_pseudocount, center
from taxicab_qsr.taxicab.config import (
    EXIT_DATA_ERROR,
    EXIT_INTERNAL,
    EXIT_SUCCESS,
    EXIT_USAGE,
    SEPARATOR_LONG,
    SETTINGS_FILE,
)
from taxicab_qsr.taxicab.errors import AxisOutOfRangeError, ReportIoError, TaxicabError, UsageError
from taxicab_qsr.taxicab.qsr import partition_labels, qsr_report, recommend_method
from taxicab_qsr.taxicab.report_io import CsvOptions, ReportFormat, build_report, read_table_csv, write_report
from taxicab_qsr.taxicab.reporting import print_comparison, print_dispersions, print_qsr_table, print_violations
from taxicab_qsr.taxicab.scores import PrincipalScores, map_coordinates, principal_scores
from taxicab_qsr.taxicab.settings import Settings, load_settings
from taxicab_qsr.taxicab.svgmap import render_map
from taxicab_qsr.taxicab.tsvd import SearchConfig, check_decomposition, decompose
from taxicab_qsr.taxicab.types import (
    ContingencyTable,
    Decomposition,
    Method,
    QsrRecord,
    SearchStrategy,
    TableRef,
    correspondence,
)

logger = get_logger(__name__)

METHOD_CHOICES = ["tca", "tlra", "both"]
SEARCH_CHOICES = ["auto", *(strategy.value for strategy in SearchStrategy)]


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass(frozen=True)
class MethodRun:
    """Everything one centering method produced for one table."""

    method: Method
    decomposition: Decomposition
    qsr: list[QsrRecord]
    scores: PrincipalScores
    problems: list[str]


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=str, required=True, help="CSV file with the table to analyze")
    parser.add_argument("--add-one", action="store_true", help="Add 1 to every cell before analysis")
    parser.add_argument("--search", choices=SEARCH_CHOICES, default=None, help="Axis search strategy")
    parser.add_argument("--axes", type=int, default=None, help="Number of axes to extract")
    parser.add_argument("--seed", type=int, default=None, help="Seed for the genetic search")
    parser.add_argument("--workers", type=int, default=None, help="Threads for exhaustive search")
    parser.add_argument("--exhaustive-cap", type=int, default=None, help="Largest side exhaustive search enumerates")
    parser.add_argument("--config", type=str, default=None, help=f"YAML settings file (default: {SETTINGS_FILE})")
    parser.add_argument("--dataset", type=str, default=None, help="Dataset name (default: input file stem)")
    parser.add_argument("--delimiter", type=str, default=",", help="CSV field delimiter")
    parser.add_argument("--no-row-labels", action="store_true", help="Input has no label row or label column")


def parse_cli_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse CLI arguments for the analyze and map subcommands."""
    parser = CliParser(description="Taxicab TCA/TLRA analysis with QSR quality of signs.")
    subcommands = parser.add_subparsers(dest="command", required=True)

    analyze = subcommands.add_parser("analyze", help="Decompose a table and write reports")
    _add_common_args(analyze)
    analyze.add_argument("--method", choices=METHOD_CHOICES, default="both", help="Centering method")
    analyze.add_argument("--out", type=str, default=None, help="Output directory for reports")
    analyze.add_argument("--format", choices=[fmt.value for fmt in ReportFormat], default=None, help="Report format")

    map_parser = subcommands.add_parser("map", help="Render a symmetric map as SVG")
    _add_common_args(map_parser)
    map_parser.add_argument("--method", choices=METHOD_CHOICES[:2], default="tlra", help="Centering method")
    map_parser.add_argument("--axes-pair", type=str, default="1,2", help="Two distinct axes, e.g. 1,2")
    map_parser.add_argument("--out", type=str, default=None, help="SVG file to write")
    map_parser.add_argument("--title", type=str, default=None, help="Map title")
    map_parser.add_argument("--width", type=int, default=None, help="Map width in pixels")
    map_parser.add_argument("--height", type=int, default=None, help="Map height in pixels")
    map_parser.add_argument("--hide-row-labels", action="store_true", help="Do not label row points")
    map_parser.add_argument("--hide-col-labels", action="store_true", help="Do not label column points")

    return parser.parse_args(argv)


def parse_axis_pair(text: str) -> tuple[int, int]:
    """'1,2' -> (1, 2)."""
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2 or not all(part.isdigit() for part in parts):
        raise UsageError(f"--axes-pair expects two axis numbers like 1,2, got '{text}'")
    return int(parts[0]), int(parts[1])


def _check_positive(name: str, value: int | None) -> None:
    if value is not None and value < 1:
        raise UsageError(f"{name} must be >= 1, got {value}")


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def resolve_settings(args: argparse.Namespace) -> Settings:
    """Settings file values with command-line flags applied on top."""
    for name, value in (("--axes", args.axes), ("--workers", args.workers), ("--exhaustive-cap", args.exhaustive_cap)):
        _check_positive(name, value)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise UsageError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")

    settings = load_settings(args.config or SETTINGS_FILE, required=args.config is not None)
    search = settings.search
    if args.search is not None:
        search = replace(search, strategy=None if args.search == "auto" else SearchStrategy(args.search))
    if args.axes is not None:
        search = replace(search, max_axes=args.axes)
    if args.workers is not None:
        search = replace(search, workers=args.workers)
    if args.exhaustive_cap is not None:
        search = replace(search, exhaustive_cap=args.exhaustive_cap)
    if args.seed is not None:
        search = replace(search, genetic=replace(search.genetic, rng_seed=args.seed))
    return replace(settings, search=search)


def load_table(args: argparse.Namespace) -> ContingencyTable:
    options = CsvOptions(has_row_labels=not args.no_row_labels, delimiter=args.delimiter)
    table = read_table_csv(Path(args.input), options)
    if args.add_one:
        table = add_pseudocount(table, 1.0)
    return table


def run_method(table: ContingencyTable, method: Method, cfg: SearchConfig) -> MethodRun:
    """Center, decompose, score and check one method."""
    logger.info(f"-> {method.value.upper()}: {cfg.strategy.value} search, up to {cfg.max_axes} axes")
    p = correspondence(table)
    x = center(p, method, table)
    dec = decompose(x, cfg, method=method, table_ref=TableRef.of(table))
    return MethodRun(
        method=method,
        decomposition=dec,
        qsr=qsr_report(dec),
        scores=principal_scores(dec, p),
        problems=check_decomposition(dec),
    )


def print_run(run: MethodRun) -> None:
    print_dispersions(run.method.value, run.decomposition.deltas)
    partitions = [partition_labels(axis, run.decomposition.table_ref) for axis in run.decomposition.axes]
    print_qsr_table(run.method.value, run.qsr, partitions)
    print_violations(run.method.value, run.problems)


def _methods(choice: str) -> list[Method]:
    return [Method.TCA, Method.TLRA] if choice == "both" else [Method(choice)]


def cmd_analyze(args: argparse.Namespace) -> int:
    """Analyze with one or both centerings and write one report per method."""
    settings = resolve_settings(args)
    table = load_table(args)
    dataset = args.dataset or table.name
    cfg = settings.search.to_config(table.n_rows, table.n_cols)
    logger.info(f"Dataset: {dataset} ({table.n_rows} x {table.n_cols})")

    runs = [run_method(table, method, cfg) for method in _methods(args.method)]
    for run in runs:
        print_run(run)

    recommendation = None
    if len(runs) == 2:
        tca, tlra = runs
        considered = min(len(tca.qsr), len(tlra.qsr))
        if considered:
            recommendation = recommend_method(tca.qsr, tlra.qsr, axes_considered=considered)
            print_comparison(tca.qsr, tlra.qsr, recommendation)

    fmt = ReportFormat(args.format) if args.format else settings.output.format
    out_dir = Path(args.out or settings.output.directory)
    seed = cfg.genetic.rng_seed if cfg.strategy is SearchStrategy.GENETIC else None
    for run in runs:
        report = build_report(dataset, run.decomposition, run.qsr, run.scores, recommendation, rng_seed=seed)
        suffix = ".json" if fmt is ReportFormat.JSON else ""
        target = out_dir / f"{dataset}-{run.method.value}{suffix}"
        write_report(report, fmt, target)
        logger.info(f"[OK] {run.method.value.upper()} report written to {target}")
    return EXIT_SUCCESS


def cmd_map(args: argparse.Namespace) -> int:
    """Render the symmetric map of one method for one pair of axes."""
    axis_pair = parse_axis_pair(args.axes_pair)
    settings = resolve_settings(args)
    search = settings.search
    if args.axes is None:
        search = replace(search, max_axes=max(search.max_axes, *axis_pair))

    style = settings.map
    if args.width is not None:
        style = replace(style, width=args.width)
    if args.height is not None:
        style = replace(style, height=args.height)
    if args.hide_row_labels:
        style = replace(style, show_row_labels=False)
    if args.hide_col_labels:
        style = replace(style, show_col_labels=False)

    table = load_table(args)
    dataset = args.dataset or table.name
    method = Method(args.method)
    run = run_method(table, method, search.to_config(table.n_rows, table.n_cols))
    print_violations(method.value, run.problems)

    coords = map_coordinates(run.scores, axis_pair)
    title = args.title if args.title is not None else f"{dataset}: {method.value.upper()} map, axes {axis_pair[0]} and {axis_pair[1]}"
    svg = render_map(coords, style, title)

    out = Path(args.out) if args.out else Path(settings.output.directory) / (
        f"{dataset}-{method.value}-map-{axis_pair[0]}-{axis_pair[1]}.svg"
    )
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(svg, encoding="utf-8")
    except OSError as exc:
        raise ReportIoError(str(out), exc.strerror or str(exc)) from None
    logger.info(f"[OK] Map written to {out}")
    return EXIT_SUCCESS


def main(argv: list[str] | None = None) -> int:
    """Entrypoint for the analyze and map subcommands."""
    try:
        args = parse_cli_args(argv)

        logger.info(SEPARATOR_LONG)
        logger.info(f"TAXICAB ANALYSIS: {args.command.upper()}")
        logger.info(SEPARATOR_LONG)

        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_map(args)

    except (UsageError, AxisOutOfRangeError) as e:
        logger.error(f"\n[FAIL] USAGE ERROR: {e!s}\n")
        return EXIT_USAGE
    except (TaxicabError, FileNotFoundError) as e:
        logger.error(f"\n[FAIL] DATA ERROR: {e!s}\n")
        return EXIT_DATA_ERROR
    except Exception as e:
        logger.error(f"\n[FAIL] CRITICAL ERROR: {e!s}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
