"""Growth curves and trunk-diameter models for the nine urban-tree cases.

Height H(t) (cm, t in years since planting) follows one curve per wood
type; shrubs of every wood type share a single linear curve.  Tall trees
grow along the bare curve, while medium trees and shrubs stop growing at a
fixed cap (850 cm from 16.412 y, 400 cm from 3.72093 y).  The cap is
applied from the cap age onward for every wood type, so deciduous and
conifer medium heights drop onto 850 cm at the cap age even though their
curves sit above it there; ``SpeciesSpec.continuous_cap`` selects the
min-based alternative.

Trunk diameter d (cm) is piecewise linear in height.  Segments are
half-open ``[h_lo, h_hi)`` with the last segment closed above, i.e. the
upper segment owns each boundary height.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np

from .errors import DomainError, RangeError, ValidationError

__all__ = [
    "WoodType",
    "SizeClass",
    "SpeciesSpec",
    "DiameterSegment",
    "DiameterModel",
    "TimeSegment",
    "species",
    "all_species",
    "height",
    "uncapped_height",
    "time_at_height",
    "diameter_from_height",
    "default_diameter_models",
    "integration_segments",
    "MEDIUM_CAP_HEIGHT_CM",
    "MEDIUM_CAP_TIME_YEARS",
    "SHRUB_CAP_HEIGHT_CM",
    "SHRUB_CAP_TIME_YEARS",
    "CONIFER_DOMAIN_START_YEARS",
]

Numeric = Union[float, np.ndarray]


class WoodType(str, Enum):
    EVERGREEN = "evergreen"
    DECIDUOUS = "deciduous"
    CONIFER = "conifer"


class SizeClass(str, Enum):
    TALL = "tall"
    MEDIUM = "medium"
    SHRUB = "shrub"


MEDIUM_CAP_HEIGHT_CM = 850.0
MEDIUM_CAP_TIME_YEARS = 16.412
SHRUB_CAP_HEIGHT_CM = 400.0
SHRUB_CAP_TIME_YEARS = 3.72093
CONIFER_DOMAIN_START_YEARS = 1.0

SHRUB_GROWTH_CM_PER_YEAR = 107.5
_EXP_SCALE_CM = 2500.0
_EXP_BASE = {WoodType.EVERGREEN: 0.975, WoodType.DECIDUOUS: 0.962}
_CONIFER_OFFSET_CM = 35.0
_CONIFER_SCALE_CM = 5471.0
_CONIFER_RATE = 0.00592
_CONIFER_SHAPE = 0.65669

_BOUNDARY_EPS = 1e-12

_CAP_BY_SIZE = {
    SizeClass.TALL: (None, None),
    SizeClass.MEDIUM: (MEDIUM_CAP_HEIGHT_CM, MEDIUM_CAP_TIME_YEARS),
    SizeClass.SHRUB: (SHRUB_CAP_HEIGHT_CM, SHRUB_CAP_TIME_YEARS),
}


def _domain_start_for(wood: "WoodType") -> float:
    return CONIFER_DOMAIN_START_YEARS if wood is WoodType.CONIFER else 0.0


@dataclass(frozen=True)
class SpeciesSpec:
    """One of the nine wood-type x size-class growth cases.

    Attributes:
        wood: Wood type selecting the growth curve and diameter model.
        size: Size class selecting the cap rule.
        cap_height: Height held after the cap age (cm); ``None`` for tall.
        cap_time: Age at which growth stops (years); ``None`` for tall.
        domain_start: First valid age (1 for conifers, whose curve is
            undefined below t = 1; 0 otherwise).
        continuous_cap: Use ``min(curve, cap_height)`` instead of snapping
            to the cap height at the cap age.  Non-default variant; the
            reference tables are reproduced with ``False``.
    """

    wood: WoodType
    size: SizeClass
    cap_height: float | None
    cap_time: float | None
    domain_start: float
    continuous_cap: bool = False

    def __post_init__(self):
        expected_cap = _CAP_BY_SIZE[self.size]
        if (self.cap_height, self.cap_time) != expected_cap:
            raise ValidationError(
                f"{self.size.value} specs must have cap {expected_cap}, "
                f"got ({self.cap_height}, {self.cap_time})"
            )
        expected_start = _domain_start_for(self.wood)
        if self.domain_start != expected_start:
            raise ValidationError(
                f"{self.wood.value} specs start at t = {expected_start}, "
                f"got {self.domain_start}"
            )


def species(
    wood: WoodType | str,
    size: SizeClass | str,
    *,
    continuous_cap: bool = False,
) -> SpeciesSpec:
    """Build the spec for a wood type and size class."""
    wood = WoodType(wood)
    size = SizeClass(size)
    cap_height, cap_time = _CAP_BY_SIZE[size]
    return SpeciesSpec(
        wood, size, cap_height, cap_time, _domain_start_for(wood), continuous_cap
    )


def all_species() -> tuple[SpeciesSpec, ...]:
    """The nine default specs, size-major (tall, medium, shrub)."""
    return tuple(
        species(wood, size) for size in SizeClass for wood in WoodType
    )


@dataclass(frozen=True)
class DiameterSegment:
    """Affine height->diameter rule active on ``[h_lo, h_hi)`` (cm)."""

    h_lo: float
    h_hi: float | None  # None = open above
    slope: float
    intercept: float

    def diameter(self, h: Numeric) -> Numeric:
        return self.slope * h + self.intercept

    def describe(self) -> str:
        return f"d = {self.slope:g}*H{self.intercept:+g}"


@dataclass(frozen=True)
class DiameterModel:
    """Piecewise-linear height->diameter map for one wood type.

    Segments must be contiguous (each ``h_lo`` equals the previous
    ``h_hi``), start at 0, end open, have positive slope, and evaluate to
    a nonnegative diameter throughout.  ``wood`` may be ``None`` for
    models fitted from bare (height, diameter) points.
    """

    wood: WoodType | None
    segments: tuple[DiameterSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("diameter model needs at least one segment")
        if self.segments[0].h_lo != 0.0:
            raise ValidationError("first segment must start at height 0")
        if self.segments[-1].h_hi is not None:
            raise ValidationError("last segment must be open above")
        prev_hi = 0.0
        for seg in self.segments:
            if seg.h_lo != prev_hi:
                raise ValidationError(
                    f"segments not contiguous at height {seg.h_lo}"
                )
            if seg.h_hi is not None and seg.h_hi <= seg.h_lo:
                raise ValidationError(f"empty segment at height {seg.h_lo}")
            if seg.slope <= 0.0:
                raise ValidationError(
                    f"segment at height {seg.h_lo} has nonpositive slope"
                )
            # slope > 0, so the minimum diameter sits at h_lo; the tiny
            # slack absorbs round-off when a fit recovers an exact zero
            if seg.diameter(seg.h_lo) < -1e-9:
                raise ValidationError(
                    f"segment at height {seg.h_lo} gives negative diameter"
                )
            prev_hi = seg.h_hi


_DEFAULT_SEGMENTS: dict[WoodType, tuple[tuple[float, float | None, float, float], ...]] = {
    WoodType.EVERGREEN: (
        (0.0, 250.0, 0.014, 0.0),
        (250.0, 300.0, 0.0318, -4.4586),
        (300.0, None, 0.051, -10.717),
    ),
    WoodType.DECIDUOUS: (
        (0.0, 300.0, 0.0096, 1.2208),
        (300.0, None, 0.0429, -9.5903),
    ),
    WoodType.CONIFER: (
        (0.0, 300.0, 0.0127, 0.9554),
        (300.0, None, 0.0332, -5.6785),
    ),
}


def default_diameter_models() -> dict[WoodType, DiameterModel]:
    """The three built-in diameter models, keyed by wood type."""
    return {
        wood: DiameterModel(
            wood=wood,
            segments=tuple(DiameterSegment(*row) for row in rows),
        )
        for wood, rows in _DEFAULT_SEGMENTS.items()
    }


def _conifer_curve(t: np.ndarray) -> np.ndarray:
    decay = 1.0 - np.exp(-_CONIFER_RATE * (t - 1.0))
    return _CONIFER_OFFSET_CM + _CONIFER_SCALE_CM * decay**_CONIFER_SHAPE


def _growth_curve(spec: SpeciesSpec, t: np.ndarray) -> np.ndarray:
    """Bare growth branch, ignoring the cap."""
    if spec.size is SizeClass.SHRUB:
        return SHRUB_GROWTH_CM_PER_YEAR * t
    if spec.wood is WoodType.CONIFER:
        return _conifer_curve(t)
    base = _EXP_BASE[spec.wood]
    return _EXP_SCALE_CM * (1.0 - base**t)


def _curve_start_height(spec: SpeciesSpec) -> float:
    if spec.size is SizeClass.SHRUB:
        return SHRUB_GROWTH_CM_PER_YEAR * spec.domain_start
    if spec.wood is WoodType.CONIFER:
        return _CONIFER_OFFSET_CM
    return 0.0


def _curve_sup_height(spec: SpeciesSpec) -> float:
    """Supremum of the bare growth branch (not attained)."""
    if spec.size is SizeClass.SHRUB:
        return math.inf
    if spec.wood is WoodType.CONIFER:
        return _CONIFER_OFFSET_CM + _CONIFER_SCALE_CM
    return _EXP_SCALE_CM


def uncapped_height(spec: SpeciesSpec, t: Numeric) -> Numeric:
    """Bare growth-branch height, ignoring any cap.

    Used to place and evaluate integration pieces: on a growth-branch
    piece whose upper endpoint is the cap age, the integrand must follow
    the curve all the way to the endpoint, not the capped value.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < spec.domain_start):
        raise DomainError(
            f"t must be >= {spec.domain_start} for {spec.wood.value} "
            f"{spec.size.value}"
        )
    out = _growth_curve(spec, arr)
    return float(out) if arr.ndim == 0 else out


def height(spec: SpeciesSpec, t: Numeric) -> Numeric:
    """Tree height in cm at ``t`` years since planting.

    Growth curves by wood type:

        evergreen   H(t) = 2500 (1 - 0.975^t)
        deciduous   H(t) = 2500 (1 - 0.962^t)
        conifer     H(t) = 35 + 5471 (1 - e^(-0.00592 (t-1)))^0.65669
        shrub       H(t) = 107.5 t            (any wood type)

    Medium trees and shrubs return ``cap_height`` for ``t >= cap_time``
    and the bare curve before that; the pre-cap branch is not clamped even
    where it exceeds the cap height.  With ``spec.continuous_cap`` the
    result is ``min(curve, cap_height)`` instead.

    Args:
        spec: Species case to evaluate.
        t: Years since planting, scalar or numpy array.

    Returns:
        Height in cm, matching the shape of ``t``.

    Raises:
        DomainError: If any ``t`` lies below ``spec.domain_start``
            (conifer curves are undefined below t = 1, where the base
            ``1 - e^(-0.00592 (t-1))`` turns negative).
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < spec.domain_start):
        raise DomainError(
            f"t must be >= {spec.domain_start} for {spec.wood.value} "
            f"{spec.size.value}"
        )
    curve = _growth_curve(spec, arr)
    if spec.cap_height is None:
        out = curve
    elif spec.continuous_cap:
        out = np.minimum(curve, spec.cap_height)
    else:
        out = np.where(arr >= spec.cap_time, spec.cap_height, curve)
    return float(out) if arr.ndim == 0 else out


def time_at_height(spec: SpeciesSpec, h: float) -> float:
    """Years at which the growth branch reaches height ``h`` cm.

    Inverts the bare growth curve (the cap is ignored, so the result may
    exceed the cap age; callers placing integration boundaries filter by
    the cap themselves).  Evergreen, deciduous and shrub curves invert in
    closed form; the conifer curve is inverted by bisection on [1, 1e4]
    to an absolute tolerance of 1e-9 years.

    Raises:
        DomainError: If ``h`` is negative.
        RangeError: If ``h`` is not attained on the increasing branch
            (below the height at ``domain_start`` or at/above the curve's
            supremum).
    """
    h = float(h)
    if h < 0.0:
        raise DomainError("height must be nonnegative")
    start_h = _curve_start_height(spec)
    if h < start_h:
        raise RangeError(
            f"height {h} cm is below the curve start ({start_h} cm at "
            f"t = {spec.domain_start})"
        )
    if h >= _curve_sup_height(spec):
        raise RangeError(
            f"height {h} cm is never reached (supremum "
            f"{_curve_sup_height(spec)} cm)"
        )
    if spec.size is SizeClass.SHRUB:
        return h / SHRUB_GROWTH_CM_PER_YEAR
    if spec.wood is not WoodType.CONIFER:
        base = _EXP_BASE[spec.wood]
        return math.log(1.0 - h / _EXP_SCALE_CM) / math.log(base)
    lo, hi = 1.0, 1e4
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        decay = 1.0 - math.exp(-_CONIFER_RATE * (mid - 1.0))
        if _CONIFER_OFFSET_CM + _CONIFER_SCALE_CM * decay**_CONIFER_SHAPE < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def diameter_from_height(model: DiameterModel, h: Numeric) -> Numeric:
    """Trunk diameter in cm for height ``h`` cm under ``model``.

    Selects the segment with ``h in [h_lo, h_hi)`` (last segment closed
    above) and returns ``slope * h + intercept``.
    """
    arr = np.asarray(h, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("height must be finite and nonnegative")
    conds = []
    values = []
    for seg in model.segments:
        upper = math.inf if seg.h_hi is None else seg.h_hi
        conds.append((arr >= seg.h_lo) & (arr < upper))
        values.append(seg.diameter(arr))
    out = np.select(conds, values)
    return float(out) if arr.ndim == 0 else out


def _segment_index(model: DiameterModel, h: float) -> int:
    for i, seg in enumerate(model.segments):
        upper = math.inf if seg.h_hi is None else seg.h_hi
        if seg.h_lo <= h < upper:
            return i
    raise DomainError(f"height {h} outside model range")


@dataclass(frozen=True)
class TimeSegment:
    """One piece of the time axis with a fixed height/diameter rule.

    ``diameter_segment`` is the single affine rule active throughout the
    piece and ``on_cap`` says whether height sits on the cap (constant)
    or follows the growth branch.
    """

    t_lo: float
    t_hi: float
    label: str = field(compare=False)
    diameter_segment: DiameterSegment = field(compare=False)
    on_cap: bool = field(compare=False)


def _cap_boundary(spec: SpeciesSpec) -> float | None:
    if spec.cap_time is None:
        return None
    if not spec.continuous_cap:
        return spec.cap_time
    try:
        return time_at_height(spec, spec.cap_height)
    except RangeError:
        return None  # curve never reaches the cap; no kink to split at


def integration_segments(
    spec: SpeciesSpec,
    model: DiameterModel,
    horizon: float,
) -> tuple[TimeSegment, ...]:
    """Partition ``[domain_start, horizon - 1]`` into smooth pieces.

    Cuts are placed wherever H(t) crosses a diameter-segment boundary on
    the growth branch, and at the cap age; each piece is labelled with
    the active diameter rule and whether height follows the growth branch
    or sits on the cap.  Crossing times are recomputed via
    :func:`time_at_height`, not hard-coded.

    Returns an empty tuple when ``horizon - 1 <= domain_start`` (no
    in-process interval to integrate).

    Raises:
        DomainError: If ``horizon <= spec.domain_start``.
    """
    if horizon <= spec.domain_start:
        raise DomainError(
            f"horizon must exceed domain start {spec.domain_start}"
        )
    upper = horizon - 1.0
    if upper <= spec.domain_start:
        return ()
    cap_t = _cap_boundary(spec)
    growth_end = upper if cap_t is None else min(cap_t, upper)

    cuts: list[float] = []
    for seg in model.segments[1:]:
        try:
            t_cross = time_at_height(spec, seg.h_lo)
        except RangeError:
            continue
        if spec.domain_start + _BOUNDARY_EPS < t_cross < growth_end - _BOUNDARY_EPS:
            cuts.append(t_cross)
    if cap_t is not None and spec.domain_start + _BOUNDARY_EPS < cap_t < upper - _BOUNDARY_EPS:
        cuts.append(cap_t)

    bounds = [spec.domain_start]
    for cut in sorted(cuts):
        if cut - bounds[-1] > _BOUNDARY_EPS:
            bounds.append(cut)
    bounds.append(upper)

    pieces = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        mid = 0.5 * (lo + hi)
        on_cap = cap_t is not None and mid >= cap_t
        h_mid = spec.cap_height if on_cap else uncapped_height(spec, mid)
        seg = model.segments[_segment_index(model, h_mid)]
        branch = "capped height" if on_cap else "growth branch"
        pieces.append(
            TimeSegment(
                t_lo=lo,
                t_hi=hi,
                label=f"{seg.describe()}, {branch}",
                diameter_segment=seg,
                on_cap=on_cap,
            )
        )
    return tuple(pieces)
