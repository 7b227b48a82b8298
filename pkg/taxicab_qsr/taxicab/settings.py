"""Optional YAML settings file (taxicab.yml) with search, map and output sections."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from ..common.logger import get_logger
from .config import (
    AUTO_EXHAUSTIVE_CAP,
    DEFAULT_CRISSCROSS_MAX_ITER,
    DEFAULT_EXHAUSTIVE_CAP,
    DEFAULT_MAX_AXES,
    DEFAULT_OUTPUT_DIR,
)
from .errors import ConfigurationError
from .report_io import ReportFormat
from .svgmap import MapStyle
from .tsvd import CrissCrossStarts, GeneticConfig, SearchConfig, choose_strategy
from .types import SearchStrategy

logger = get_logger(__name__)


@dataclass(frozen=True)
class SearchSettings:
    """Search defaults; strategy None selects exhaustive or criss-cross by table size."""

    strategy: SearchStrategy | None = None
    max_axes: int = DEFAULT_MAX_AXES
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    auto_cap: int = AUTO_EXHAUSTIVE_CAP
    crisscross_starts: CrissCrossStarts = CrissCrossStarts.ALL_COLUMNS
    crisscross_max_iter: int = DEFAULT_CRISSCROSS_MAX_ITER
    workers: int = 1
    genetic: GeneticConfig = field(default_factory=GeneticConfig)

    def to_config(self, n_rows: int, n_cols: int) -> SearchConfig:
        strategy = self.strategy or choose_strategy(n_rows, n_cols, min(self.auto_cap, self.exhaustive_cap))
        return SearchConfig(
            strategy=strategy,
            max_axes=self.max_axes,
            crisscross_starts=self.crisscross_starts,
            crisscross_max_iter=self.crisscross_max_iter,
            genetic=self.genetic,
            exhaustive_cap=self.exhaustive_cap,
            workers=self.workers,
        )


@dataclass(frozen=True)
class OutputSettings:
    format: ReportFormat = ReportFormat.JSON
    directory: str = DEFAULT_OUTPUT_DIR


@dataclass(frozen=True)
class Settings:
    search: SearchSettings = field(default_factory=SearchSettings)
    map: MapStyle = field(default_factory=MapStyle)
    output: OutputSettings = field(default_factory=OutputSettings)


def load_yaml_file(path: Path) -> dict[str, Any]:
    """Load a YAML file as a dictionary."""
    try:
        with path.open(encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle) or {}
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"Cannot parse {path}: {exc}") from None
    if not isinstance(loaded, dict):
        raise ConfigurationError(f"Expected a mapping in {path}")
    return loaded


def _section(raw: dict[str, Any], name: str, allowed: set[str]) -> dict[str, Any]:
    section = raw.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigurationError(f"Settings section '{name}' must be a mapping")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigurationError(f"Unknown key(s) in '{name}': {', '.join(unknown)}")
    return section


def _typed(section: dict[str, Any], key: str, kind: type, default: Any) -> Any:
    if key not in section or section[key] is None:
        return default
    value = section[key]
    # bool is an int subclass; reject it where a number is expected
    if kind in (int, float) and isinstance(value, bool):
        raise ConfigurationError(f"Setting '{key}' must be a number, got {value!r}")
    if kind is float and isinstance(value, int):
        return float(value)
    if not isinstance(value, kind):
        raise ConfigurationError(f"Setting '{key}' must be {kind.__name__}, got {value!r}")
    return value


def _enum(section: dict[str, Any], key: str, enum_type: type, default: Any) -> Any:
    if key not in section or section[key] is None:
        return default
    try:
        return enum_type(str(section[key]).lower())
    except ValueError:
        choices = ", ".join(member.value for member in enum_type)
        raise ConfigurationError(f"Setting '{key}' must be one of {choices}, got {section[key]!r}") from None


def _parse_search(raw: dict[str, Any]) -> SearchSettings:
    search = _section(
        raw,
        "search",
        {
            "strategy",
            "max_axes",
            "exhaustive_cap",
            "auto_cap",
            "crisscross_starts",
            "crisscross_max_iter",
            "workers",
            "genetic",
        },
    )
    genetic = _section(
        search, "genetic", {"population", "generations", "mutation_rate", "elitism", "tournament_size", "seed"}
    )
    defaults = SearchSettings()
    base = GeneticConfig()

    strategy = search.get("strategy")
    return SearchSettings(
        strategy=None if strategy in (None, "auto") else _enum(search, "strategy", SearchStrategy, None),
        max_axes=_typed(search, "max_axes", int, defaults.max_axes),
        exhaustive_cap=_typed(search, "exhaustive_cap", int, defaults.exhaustive_cap),
        auto_cap=_typed(search, "auto_cap", int, defaults.auto_cap),
        crisscross_starts=_enum(search, "crisscross_starts", CrissCrossStarts, defaults.crisscross_starts),
        crisscross_max_iter=_typed(search, "crisscross_max_iter", int, defaults.crisscross_max_iter),
        workers=_typed(search, "workers", int, defaults.workers),
        genetic=GeneticConfig(
            population=_typed(genetic, "population", int, base.population),
            generations=_typed(genetic, "generations", int, base.generations),
            mutation_rate=_typed(genetic, "mutation_rate", float, base.mutation_rate),
            elitism=_typed(genetic, "elitism", int, base.elitism),
            tournament_size=_typed(genetic, "tournament_size", int, base.tournament_size),
            rng_seed=_typed(genetic, "seed", int, base.rng_seed),
        ),
    )


def _parse_map(raw: dict[str, Any]) -> MapStyle:
    section = _section(
        raw,
        "map",
        {
            "width",
            "height",
            "row_color",
            "col_color",
            "show_row_labels",
            "show_col_labels",
            "point_size",
            "margin",
            "label_offset",
            "font_size",
        },
    )
    base = MapStyle()
    return MapStyle(
        width=_typed(section, "width", int, base.width),
        height=_typed(section, "height", int, base.height),
        row_color=_typed(section, "row_color", str, base.row_color),
        col_color=_typed(section, "col_color", str, base.col_color),
        show_row_labels=_typed(section, "show_row_labels", bool, base.show_row_labels),
        show_col_labels=_typed(section, "show_col_labels", bool, base.show_col_labels),
        point_size=_typed(section, "point_size", float, base.point_size),
        margin=_typed(section, "margin", float, base.margin),
        label_offset=_typed(section, "label_offset", float, base.label_offset),
        font_size=_typed(section, "font_size", int, base.font_size),
    )


def _parse_output(raw: dict[str, Any]) -> OutputSettings:
    section = _section(raw, "output", {"format", "directory"})
    base = OutputSettings()
    return OutputSettings(
        format=_enum(section, "format", ReportFormat, base.format),
        directory=_typed(section, "directory", str, base.directory),
    )


def load_settings(path: str | Path | None, required: bool = False) -> Settings:
    """Parse a settings file; a missing optional file yields the defaults.

    Raises:
        ConfigurationError: If the file is malformed, or required and missing
    """
    if path is None:
        return Settings()
    path = Path(path)
    if not path.is_file():
        if required:
            raise ConfigurationError(f"Settings file not found: {path}")
        logger.debug(f"-> No settings file at {path}, using defaults")
        return Settings()

    raw = load_yaml_file(path)
    unknown = sorted(set(raw) - {"search", "map", "output"})
    if unknown:
        raise ConfigurationError(f"Unknown settings section(s): {', '.join(unknown)}")
    logger.debug(f"-> Loaded settings from {path}")
    return Settings(search=_parse_search(raw), map=_parse_map(raw), output=_parse_output(raw))
