"""Height/diameter field measurements and piecewise-linear model fitting.

Ships the MLIT (Ministry of Land, Infrastructure, Transport and Tourism)
street-tree girth tables as embedded reference data, converts girth to
diameter, loads measurement CSVs, and refits :class:`DiameterModel`
coefficients by per-segment ordinary least squares.
"""

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DomainError,
    ParseError,
    UnderdeterminedError,
    ValidationError,
)
from .growth import DiameterModel, DiameterSegment, WoodType

__all__ = [
    "GIRTH_PI",
    "Measurement",
    "FitResult",
    "girth_to_diameter",
    "load_measurements",
    "fit_piecewise_linear",
    "reference_tables",
    "default_breakpoints",
]

# The published girth tables divide circumference by pi rounded to 3.14;
# keeping that convention reproduces their printed diameters exactly.
GIRTH_PI = 3.14


@dataclass(frozen=True)
class Measurement:
    """One height/girth/diameter observation for a wood type.

    At ingest exactly one of ``girth``/``diameter`` is given; the loader
    fills ``diameter`` in from ``girth``.  Embedded reference rows carry
    both (girth as surveyed, diameter as published).
    """

    wood: WoodType
    height: float
    girth: float | None = None
    diameter: float | None = None


@dataclass(frozen=True)
class FitResult:
    """Fitted diameter model with per-segment diagnostics."""

    model: DiameterModel
    per_segment_r2: tuple[float, ...]
    residual_rms: float


def girth_to_diameter(girth: float) -> float:
    """Trunk diameter from circumference, using the tables' pi of 3.14."""
    if girth <= 0.0:
        raise DomainError("girth must be positive")
    return girth / GIRTH_PI


def default_breakpoints(wood: WoodType | str) -> tuple[float, ...]:
    """Breakpoints behind the built-in models: [250, 300] for evergreen,
    [300] for deciduous and conifer."""
    if WoodType(wood) is WoodType.EVERGREEN:
        return (250.0, 300.0)
    return (300.0,)


_WOOD_ALIASES = {w.value: w for w in WoodType}


def _parse_wood(text: str, row: int) -> WoodType:
    wood = _WOOD_ALIASES.get(text.strip().lower())
    if wood is None:
        raise ParseError(f"unknown wood type {text!r}", row=row)
    return wood


def _parse_positive(text: str, column: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad number {text!r} in column {column}", row=row) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value in column {column}", row=row)
    if value <= 0.0:
        raise ValidationError(f"row {row}: {column} must be positive, got {value}")
    return value


def load_measurements(path: str | Path, format: str = "csv") -> list[Measurement]:
    """Load measurements from a CSV file.

    Expected header: ``wood,height_cm,girth_cm,diameter_cm`` (the two
    trailing columns may be reduced to whichever one the file uses).
    Wood names are case-insensitive; ``#``-prefixed lines and blank lines
    are skipped; exactly one of girth/diameter must be non-empty per row.
    Girth rows are converted to diameter on load.  An empty file yields
    an empty list.

    Raises:
        ParseError: Malformed header, unknown wood, or unparseable number
            (with the 1-based data row number).
        ValidationError: Nonpositive values, or both/neither of
            girth/diameter present.
    """
    if format != "csv":
        raise ValueError(f"unsupported format {format!r}")
    with open(path, newline="", encoding="utf-8") as handle:
        rows = [
            line
            for line in csv.reader(handle)
            if line and any(cell.strip() for cell in line)
            and not line[0].lstrip().startswith("#")
        ]
    if not rows:
        return []
    header = [cell.strip().lower() for cell in rows[0]]
    for required in ("wood", "height_cm"):
        if required not in header:
            raise ParseError(f"missing column {required!r} in header")
    if "girth_cm" not in header and "diameter_cm" not in header:
        raise ParseError("header needs a girth_cm or diameter_cm column")
    index = {name: header.index(name) for name in header}

    def cell(line: list[str], column: str) -> str:
        pos = index.get(column)
        if pos is None or pos >= len(line):
            return ""
        return line[pos].strip()

    measurements = []
    for row_number, line in enumerate(rows[1:], start=1):
        wood = _parse_wood(cell(line, "wood"), row_number)
        height = _parse_positive(cell(line, "height_cm"), "height_cm", row_number)
        girth_text = cell(line, "girth_cm")
        diameter_text = cell(line, "diameter_cm")
        if bool(girth_text) == bool(diameter_text):
            raise ValidationError(
                f"row {row_number}: exactly one of girth_cm/diameter_cm "
                "must be given"
            )
        if girth_text:
            girth = _parse_positive(girth_text, "girth_cm", row_number)
            measurements.append(
                Measurement(
                    wood=wood,
                    height=height,
                    girth=girth,
                    diameter=girth_to_diameter(girth),
                )
            )
        else:
            diameter = _parse_positive(diameter_text, "diameter_cm", row_number)
            measurements.append(
                Measurement(wood=wood, height=height, diameter=diameter)
            )
    return measurements


def _ols(points: Sequence[tuple[float, float]]) -> tuple[float, float, float, float]:
    """Slope, intercept, r^2 and residual sum of squares for one segment."""
    h = np.array([p[0] for p in points], dtype=float)
    d = np.array([p[1] for p in points], dtype=float)
    slope, intercept = np.polyfit(h, d, 1)
    residuals = d - (slope * h + intercept)
    ss_res = float(residuals @ residuals)
    centered = d - d.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2, ss_res


def fit_piecewise_linear(
    points: Iterable[tuple[float, float]],
    breakpoints: Sequence[float],
    *,
    wood: WoodType | None = None,
) -> FitResult:
    """Fit one line per breakpoint segment by ordinary least squares.

    Segments are fit independently, with no continuity constraint at the
    breakpoints (the built-in models are themselves discontinuous there).
    A point lying exactly on a breakpoint contributes to both adjacent
    segments, matching how the built-in coefficients interpolate the
    reference rows at 250 and 300 cm; evaluation of the fitted model
    remains half-open.

    Args:
        points: (height_cm, diameter_cm) pairs.
        breakpoints: Strictly increasing positive segment boundaries.
        wood: Optional wood tag recorded on the fitted model.

    Raises:
        UnderdeterminedError: If a segment holds fewer than two distinct
            heights.
        ValidationError: Bad breakpoints, or a fitted segment violating
            the model invariants (nonpositive slope / negative diameter).
    """
    pts = [(float(h), float(d)) for h, d in points]
    if any(h < 0.0 for h, _ in pts):
        raise ValidationError("heights must be nonnegative")
    bps = [float(b) for b in breakpoints]
    if any(b <= 0.0 for b in bps) or sorted(set(bps)) != bps:
        raise ValidationError("breakpoints must be positive and strictly increasing")

    edges: list[tuple[float, float | None]] = []
    lower = 0.0
    for b in bps:
        edges.append((lower, b))
        lower = b
    edges.append((lower, None))

    segments = []
    r2s = []
    ss_res_total = []
    n_assigned = 0
    for lo, hi in edges:
        # boundary rows belong to both neighbouring segments
        selected = [
            (h, d) for h, d in pts if h >= lo and (hi is None or h <= hi)
        ]
        if len(selected) < 2 or len({h for h, _ in selected}) < 2:
            upper = "inf" if hi is None else f"{hi:g}"
            raise UnderdeterminedError(
                f"segment [{lo:g}, {upper}) needs two distinct heights, "
                f"has {len(selected)} point(s)"
            )
        slope, intercept, r2, ss_res = _ols(selected)
        segments.append(DiameterSegment(lo, hi, slope, intercept))
        r2s.append(r2)
        ss_res_total.append(ss_res)
        n_assigned += len(selected)

    model = DiameterModel(wood=wood, segments=tuple(segments))
    rms = math.sqrt(math.fsum(ss_res_total) / n_assigned)
    return FitResult(model=model, per_segment_r2=tuple(r2s), residual_rms=rms)


# MLIT girth tables: (height_cm, girth_cm, published_diameter_cm).
_EVERGREEN_ROWS = (
    (250, 11, 3.503185), (300, 16, 5.095541), (350, 20, 6.369427),
    (400, 37, 11.78344), (450, 36, 11.46497), (500, 35, 11.1465),
    (550, 52, 16.56051), (600, 64, 20.38217), (650, 70, 22.29299),
    (700, 83, 26.43312), (800, 95, 30.25478), (850, 100, 31.84713),
    (1000, 120, 38.21656), (1100, 150, 47.7707),
)
_DECIDUOUS_ROWS = (
    (200, 10, 3.184713), (250, 11, 3.503185), (300, 13, 4.140127),
    (350, 18, 5.732484), (400, 22, 7.006369), (450, 26, 8.280255),
    (500, 32, 10.19108), (550, 35, 11.1465), (600, 43, 13.69427),
    (650, 55, 17.51592), (700, 54, 17.19745), (800, 83, 26.43312),
    (900, 83, 26.43312), (1000, 107, 34.07643), (1100, 135, 42.99363),
)
_CONIFER_ROWS = (
    (250, 13, 4.140127), (300, 15, 4.77707), (350, 19, 6.050955),
    (400, 23, 7.324841), (450, 26, 8.280255), (500, 33, 10.50955),
    (550, 40, 12.73885), (600, 43, 13.69427), (700, 53, 16.87898),
    (800, 60, 19.10828), (900, 80, 25.47771), (1100, 100, 31.84713),
)


def reference_tables() -> dict[WoodType, tuple[Measurement, ...]]:
    """Embedded MLIT height/girth/diameter tables (14, 15 and 12 rows)."""
    rows = {
        WoodType.EVERGREEN: _EVERGREEN_ROWS,
        WoodType.DECIDUOUS: _DECIDUOUS_ROWS,
        WoodType.CONIFER: _CONIFER_ROWS,
    }
    return {
        wood: tuple(
            Measurement(wood=wood, height=float(h), girth=float(g), diameter=d)
            for h, g, d in table
        )
        for wood, table in rows.items()
    }
