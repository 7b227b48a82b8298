"""Symmetric maps rendered as standalone SVG documents."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import svgwrite

from ..common.logger import get_logger
from .errors import ConfigurationError, TaxicabError
from .scores import MapCoordinates

logger = get_logger(__name__)

FONT_FAMILY = "sans-serif"
AXIS_COLOR = "#888888"


@dataclass(frozen=True)
class MapStyle:
    """Canvas size, colors and label toggles of a symmetric map."""

    width: int = 800
    height: int = 600
    row_color: str = "#1f77b4"
    col_color: str = "#d62728"
    show_row_labels: bool = True
    show_col_labels: bool = True
    point_size: float = 4.0
    margin: float = 0.1
    label_offset: float = 6.0
    font_size: int = 12

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ConfigurationError(f"Map size must be positive, got {self.width}x{self.height}")
        if not 0.0 <= self.margin < 0.4:
            raise ConfigurationError(f"Map margin must be in [0, 0.4), got {self.margin}")
        if self.point_size <= 0:
            raise ConfigurationError(f"Point size must be positive, got {self.point_size}")
        if self.row_color == self.col_color:
            raise ConfigurationError("Row and column colors must differ")


@dataclass(frozen=True)
class Viewport:
    """Affine data-to-pixel mapping with one scale for both axes; y grows upwards in data space."""

    center_x: float
    center_y: float
    scale: float
    width: int
    height: int

    def to_pixels(self, x: float, y: float) -> tuple[float, float]:
        px = self.width / 2 + (x - self.center_x) * self.scale
        py = self.height / 2 - (y - self.center_y) * self.scale
        return round(px, 2), round(py, 2)


def fit_viewport(points: np.ndarray, style: MapStyle) -> Viewport:
    """Smallest equal-aspect frame holding every point and the origin.

    When all points coincide the frame falls back to the unit square [-1, 1]^2.
    """
    xs = np.append(points[:, 0], 0.0)
    ys = np.append(points[:, 1], 0.0)
    x_min, x_max = float(xs.min()), float(xs.max())
    y_min, y_max = float(ys.min()), float(ys.max())
    span_x, span_y = x_max - x_min, y_max - y_min

    if span_x == 0.0 and span_y == 0.0:
        logger.debug("-> Degenerate map extent, using the unit viewport")
        x_min, x_max, y_min, y_max = -1.0, 1.0, -1.0, 1.0
        span_x = span_y = 2.0

    usable_w = style.width * (1 - 2 * style.margin)
    usable_h = style.height * (1 - 2 * style.margin)
    scale = min(
        usable_w / span_x if span_x > 0 else math.inf,
        usable_h / span_y if span_y > 0 else math.inf,
    )
    return Viewport(
        center_x=(x_min + x_max) / 2,
        center_y=(y_min + y_max) / 2,
        scale=scale,
        width=style.width,
        height=style.height,
    )


def _label_position(
    viewport: Viewport, x: float, y: float, rank: int, style: MapStyle
) -> tuple[float, float]:
    """Push a label radially away from the origin, staggered by rank."""
    px, py = viewport.to_pixels(x, y)
    ox, oy = viewport.to_pixels(0.0, 0.0)
    dx, dy = px - ox, py - oy
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        dx, dy, norm = 1.0, -1.0, math.sqrt(2.0)
    distance = style.point_size + style.label_offset * (1 + (rank % 3) / 2)
    return round(px + dx / norm * distance, 2), round(py + dy / norm * distance, 2)


def render_map(coords: MapCoordinates, style: MapStyle | None = None, title: str = "") -> str:
    """SVG 1.1 document with rows and columns in one frame and a crosshair through the origin.

    Raises:
        TaxicabError: If there is no row point or no column point, or a coordinate is not finite
    """
    style = style or MapStyle()
    if coords.row_points.shape[0] == 0 or coords.col_points.shape[0] == 0:
        raise TaxicabError("A map needs at least one row point and one column point")
    points = np.vstack([coords.row_points, coords.col_points])
    if not np.all(np.isfinite(points)):
        raise TaxicabError("Map coordinates must be finite")

    viewport = fit_viewport(points, style)
    alpha, beta = coords.axis_pair
    dwg = svgwrite.Drawing(size=(style.width, style.height), profile="full")
    dwg.viewbox(0, 0, style.width, style.height)
    dwg.add(dwg.rect(insert=(0, 0), size=(style.width, style.height), fill="white"))

    ox, oy = viewport.to_pixels(0.0, 0.0)
    crosshair = dwg.add(dwg.g(class_="crosshair", stroke=AXIS_COLOR, stroke_width=1, stroke_dasharray="4,3"))
    crosshair.add(dwg.line(start=(0, oy), end=(style.width, oy)))
    crosshair.add(dwg.line(start=(ox, 0), end=(ox, style.height)))

    text_style = {"font_family": FONT_FAMILY, "font_size": style.font_size}
    dwg.add(dwg.text(f"axis {alpha}", insert=(style.width - 4, round(oy - 4, 2)), text_anchor="end", fill=AXIS_COLOR, **text_style))
    dwg.add(dwg.text(f"axis {beta}", insert=(round(ox + 4, 2), style.font_size + 2), fill=AXIS_COLOR, **text_style))
    if title:
        dwg.add(dwg.text(title, insert=(style.width / 2, style.font_size * 1.5), text_anchor="middle", font_weight="bold", **text_style))

    layers = (
        ("row", coords.row_points, coords.row_labels, style.row_color, style.show_row_labels, 0),
        ("col", coords.col_points, coords.col_labels, style.col_color, style.show_col_labels, coords.row_points.shape[0]),
    )
    for kind, pts, labels, color, show_labels, rank_start in layers:
        group = dwg.add(dwg.g(class_=f"{kind}-points", fill=color))
        for k, ((x, y), label) in enumerate(zip(pts, labels, strict=True)):
            group.add(dwg.circle(center=viewport.to_pixels(float(x), float(y)), r=style.point_size, class_=f"{kind}-point"))
            if show_labels:
                insert = _label_position(viewport, float(x), float(y), rank_start + k, style)
                group.add(dwg.text(label, insert=insert, class_=f"{kind}-label", **text_style))

    return dwg.tostring()
