"""Stored CO2 per tree and the expected 100-year absorption integral.

A standing tree's stored CO2 is its trunk-cylinder volume times a carbon
constant c:

    stored(t) = H(t) * (d(t)/2)^2 * pi * c        [t-CO2]

The expected absorption per planted tree over a horizon (default 100
years) weights that store by the removal-time density p (1-p)^t for trees
removed in-process, plus the survivor term for trees still standing at the
horizon:

    total = integral_{t0}^{horizon-1} (1-p)^t p stored(t) dt
            + (1-p)^horizon stored(horizon)

The integral's upper limit is horizon - 1 while the survivor exponent is
horizon; the two are deliberately not harmonized (the tabulated reference
values require this exact form).  Conifers integrate from t = 1, losing
[0, 1), for the same reason.
"""

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import growth
from .errors import DomainError, ValidationError
from .growth import DiameterModel, SpeciesSpec, TimeSegment
from .quadrature import DEFAULT_QUADRATURE, Quadrature, integrate
from .removal import RemovalModel, survival_fraction

__all__ = [
    "CarbonFactors",
    "CarbonConstant",
    "SegmentAbsorption",
    "AbsorptionReport",
    "BreakdownRow",
    "carbon_constant",
    "default_carbon_factors",
    "default_carbon_constant",
    "stored_co2",
    "in_process_integrand",
    "segment_integrand",
    "creditable_absorption",
    "expected_absorption",
    "breakdown_table",
    "CO2_PER_CARBON",
]

Numeric = Union[float, np.ndarray]

CO2_PER_CARBON = 44.0 / 12.0  # molar-mass ratio, t-C -> t-CO2


@dataclass(frozen=True)
class CarbonFactors:
    """Biomass-to-carbon conversion factors from national inventory data.

    Attributes:
        bef: Biomass Expansion Factor (dimensionless) scaling trunk
            biomass to whole-aboveground biomass.
        rtsr: Root-to-Shoot Ratio (dimensionless); (1 + rtsr) extends
            aboveground to whole-tree biomass.
        bd: Bulk Density, tonnes dry matter per m3 of green volume.
        cf: Carbon Fraction, tonnes carbon per tonne dry matter.
    """

    bef: float
    rtsr: float
    bd: float
    cf: float

    def __post_init__(self):
        if min(self.bef, self.bd, self.cf) <= 0.0:
            raise ValidationError("bef, bd and cf must be positive")
        if self.rtsr < 0.0:
            raise ValidationError("root-to-shoot ratio must be nonnegative")
        if self.cf > 1.0:
            raise ValidationError("carbon fraction cannot exceed 1")
        if self.rtsr >= 5.0:
            raise ValidationError(f"root-to-shoot ratio {self.rtsr} fails sanity bound")


@dataclass(frozen=True)
class CarbonConstant:
    """Tonnes of CO2 per cm3 of trunk cylinder; always derived from
    :class:`CarbonFactors`, never hand-set in reports."""

    c: float

    def __post_init__(self):
        if self.c <= 0.0:
            raise ValidationError("carbon constant must be positive")


def default_carbon_factors() -> CarbonFactors:
    """Factor values from Japan's Greenhouse Gas Inventory Report (2022)."""
    return CarbonFactors(bef=1.664736867, rtsr=0.2715789378, bd=0.3978947401, cf=0.51)


def carbon_constant(factors: CarbonFactors) -> CarbonConstant:
    """c = BEF * (1 + RtSR) * BD * CF * (44/12) * 1e-6.

    The 1e-6 converts cm3 of trunk volume to m3 (matching BD's units);
    44/12 converts tonnes of carbon to tonnes of CO2, so the constant and
    everything downstream are in t-CO2 despite BD/CF being carbon-mass
    factors.
    """
    c = (
        factors.bef
        * (1.0 + factors.rtsr)
        * factors.bd
        * factors.cf
        * CO2_PER_CARBON
        * 1e-6
    )
    return CarbonConstant(c=c)


def default_carbon_constant() -> CarbonConstant:
    return carbon_constant(default_carbon_factors())


def stored_co2(
    spec: SpeciesSpec,
    model: DiameterModel,
    constant: CarbonConstant,
    t: Numeric,
) -> Numeric:
    """CO2 stored in one standing tree at age ``t``:
    ``H(t) (d(t)/2)^2 pi c`` with the trunk taken as a cylinder."""
    h = growth.height(spec, t)
    d = growth.diameter_from_height(model, h)
    return h * (0.5 * d) ** 2 * math.pi * constant.c


def in_process_integrand(
    spec: SpeciesSpec,
    model: DiameterModel,
    removal: RemovalModel,
    constant: CarbonConstant,
) -> Callable[[Numeric], Numeric]:
    """The first-term integrand ``(1-p)^t p stored(t)``.

    The returned callable accepts scalars or numpy arrays, so it feeds
    both the adaptive rule and the vectorized reference rule.
    """

    def f(t: Numeric) -> Numeric:
        weight = survival_fraction(removal, t) * removal.p
        return weight * stored_co2(spec, model, constant, t)

    return f


def segment_integrand(
    spec: SpeciesSpec,
    segment: TimeSegment,
    removal: RemovalModel,
    constant: CarbonConstant,
) -> Callable[[Numeric], Numeric]:
    """First-term integrand restricted to one integration piece.

    The piece's single affine diameter rule (and, on the cap, its
    constant height) is applied directly, so the integrand stays smooth
    across the whole piece even where floating-point height evaluation
    would land a hair on the wrong side of a model boundary.
    """
    rule = segment.diameter_segment
    p = removal.p

    if segment.on_cap:
        h_cap = spec.cap_height
        store = h_cap * (0.5 * rule.diameter(h_cap)) ** 2 * math.pi * constant.c

        def f_cap(t: Numeric) -> Numeric:
            return survival_fraction(removal, t) * p * store

        return f_cap

    def f(t: Numeric) -> Numeric:
        h = growth.uncapped_height(spec, t)
        store = h * (0.5 * rule.diameter(h)) ** 2 * math.pi * constant.c
        return survival_fraction(removal, t) * p * store

    return f


def creditable_absorption(
    spec: SpeciesSpec,
    model: DiameterModel,
    removal: RemovalModel,
    constant: CarbonConstant,
    horizon: float = 100.0,
) -> float:
    """Survivor term ``(1-p)^horizon * stored(horizon)``: the CO2 in trees
    still standing at the horizon, the proposed credit basis."""
    if horizon <= spec.domain_start:
        raise DomainError(f"horizon must exceed domain start {spec.domain_start}")
    weight = survival_fraction(removal, float(horizon))
    return weight * stored_co2(spec, model, constant, float(horizon))


@dataclass(frozen=True)
class SegmentAbsorption:
    """In-process absorption accumulated over one time segment."""

    t_lo: float
    t_hi: float
    label: str
    value: float


@dataclass(frozen=True)
class AbsorptionReport:
    """Per-tree absorption over the horizon, segment by segment.

    ``expected_total`` always equals the segment sum plus ``creditable``;
    the constructor enforces this to 1e-9 relative along with
    nonnegativity and ``creditable <= expected_total``.
    """

    spec: SpeciesSpec
    p: float
    horizon: float
    segments: tuple[SegmentAbsorption, ...]
    creditable: float
    expected_total: float

    def __post_init__(self):
        if self.creditable < 0.0 or any(s.value < 0.0 for s in self.segments):
            raise ValidationError("absorption values must be nonnegative")
        total = math.fsum([s.value for s in self.segments] + [self.creditable])
        if abs(total - self.expected_total) > 1e-9 * abs(self.expected_total):
            raise ValidationError("segment sum does not reproduce expected_total")
        if self.creditable > self.expected_total:
            raise ValidationError("creditable term exceeds expected total")

    @property
    def in_process_total(self) -> float:
        return math.fsum(s.value for s in self.segments)


def expected_absorption(
    spec: SpeciesSpec,
    model: DiameterModel,
    removal: RemovalModel,
    constant: CarbonConstant,
    horizon: float = 100.0,
    quadrature: Quadrature = DEFAULT_QUADRATURE,
) -> AbsorptionReport:
    """Expected CO2 absorption of one planted tree over ``horizon`` years.

    The in-process term is integrated piece by piece over
    :func:`canopy.growth.integration_segments` (upper limit
    ``horizon - 1``); the survivor term uses exponent ``horizon``.

    Raises:
        DomainError: If ``horizon <= spec.domain_start``.
        IntegrationError: If the quadrature cannot reach its tolerance.
    """
    pieces = growth.integration_segments(spec, model, horizon)
    segments = tuple(
        SegmentAbsorption(
            t_lo=piece.t_lo,
            t_hi=piece.t_hi,
            label=piece.label,
            value=integrate(
                segment_integrand(spec, piece, removal, constant),
                piece.t_lo,
                piece.t_hi,
                quadrature,
            ),
        )
        for piece in pieces
    )
    creditable = creditable_absorption(spec, model, removal, constant, horizon)
    total = math.fsum([s.value for s in segments] + [creditable])
    return AbsorptionReport(
        spec=spec,
        p=removal.p,
        horizon=float(horizon),
        segments=segments,
        creditable=creditable,
        expected_total=total,
    )


@dataclass(frozen=True)
class BreakdownRow:
    """One row of the per-period breakdown table."""

    period: str
    in_process: float
    creditable: float | None  # set on the final row only


def breakdown_table(report: AbsorptionReport) -> list[BreakdownRow]:
    """Rows of (period, in-process absorption, creditable), with the
    survivor term shown on the final row only."""
    if not report.segments:
        return [BreakdownRow(period="-", in_process=0.0, creditable=report.creditable)]
    rows = []
    last = len(report.segments) - 1
    for i, seg in enumerate(report.segments):
        rows.append(
            BreakdownRow(
                period=f"{seg.t_lo:.6g} - {seg.t_hi:.6g}",
                in_process=seg.value,
                creditable=report.creditable if i == last else None,
            )
        )
    return rows
