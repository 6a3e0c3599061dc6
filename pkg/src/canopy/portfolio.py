"""Portfolio aggregation: inventories, emissions deduction, steward shares.

Aggregates per-tree absorption over planting cohorts, subtracts the
project's own emissions from the gross credit, and attributes a share of
each cohort's credit to the greening business by its years of stewardship
(linear time share: ``total * steward_years / horizon``).
"""

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from . import carbon, growth, removal
from .carbon import CarbonConstant, expected_absorption
from .errors import (
    DomainError,
    ParseError,
    UnknownSpeciesError,
    ValidationError,
)
from .growth import DiameterModel, SizeClass, SpeciesSpec, WoodType
from .quadrature import DEFAULT_QUADRATURE, Quadrature
from .removal import RemovalModel

__all__ = [
    "CreditMode",
    "PlantingCohort",
    "ProjectParams",
    "CohortResult",
    "PortfolioReport",
    "allocate_steward_share",
    "evaluate_portfolio",
    "load_inventory",
]


class CreditMode(str, Enum):
    """Which part of the absorption counts as credit."""

    SURVIVOR_ONLY = "survivor_only"
    INCLUDE_IN_PROCESS = "include_in_process"


@dataclass(frozen=True)
class PlantingCohort:
    """A count of identically-specified trees in the inventory."""

    spec: SpeciesSpec
    count: int
    label: str = ""

    def __post_init__(self):
        if self.count < 0:
            raise ValidationError(f"cohort count must be nonnegative, got {self.count}")


@dataclass(frozen=True)
class ProjectParams:
    """Project-level evaluation parameters.

    ``steward_years`` defaults to 3, the conventional greening-business
    involvement window used by the reference tables.
    """

    horizon: float = 100.0
    project_emissions: float = 0.0
    steward_years: float = 3.0
    credit_mode: CreditMode = CreditMode.SURVIVOR_ONLY

    def __post_init__(self):
        if self.horizon <= 0.0:
            raise ValidationError("horizon must be positive")
        if self.project_emissions < 0.0:
            raise ValidationError("project_emissions must be nonnegative")
        if not 0.0 <= self.steward_years <= self.horizon:
            raise ValidationError(
                f"steward_years must lie in [0, {self.horizon}]"
            )


@dataclass(frozen=True)
class CohortResult:
    label: str
    count: int
    per_tree_total: float
    per_tree_creditable: float
    cohort_credit: float
    steward_share: float


@dataclass(frozen=True)
class PortfolioReport:
    """Aggregated credits; ``net_credit`` may be negative and is flagged
    by ``shortfall`` rather than clamped."""

    per_cohort: tuple[CohortResult, ...]
    gross_credit: float
    project_emissions: float
    net_credit: float
    shortfall: bool


def allocate_steward_share(total: float, steward_years: float, horizon: float) -> float:
    """Linear time share ``total * steward_years / horizon`` of a credit."""
    if horizon <= 0.0:
        raise DomainError("horizon must be positive")
    if not 0.0 <= steward_years <= horizon:
        raise DomainError(f"steward_years must lie in [0, {horizon}]")
    return total * steward_years / horizon


def evaluate_portfolio(
    cohorts: Sequence[PlantingCohort],
    params: ProjectParams,
    *,
    removal_models: Mapping[SizeClass, RemovalModel] | None = None,
    constant: CarbonConstant | None = None,
    diameter_models: Mapping[WoodType, DiameterModel] | None = None,
    quadrature: Quadrature = DEFAULT_QUADRATURE,
) -> PortfolioReport:
    """Evaluate an inventory of cohorts into a portfolio report.

    Per-tree values come from :func:`canopy.carbon.expected_absorption`
    for each cohort's spec; the cohort credit is ``count`` times the
    creditable (survivor) term or the expected total, by ``credit_mode``.
    Cohort order is preserved; identical specs are computed once.

    Args:
        cohorts: Inventory, in report order.
        params: Horizon, emissions, steward years and credit mode.
        removal_models: Removal model per size class; defaults to the
            census-derived constants.
        constant: Carbon constant; defaults to the derived default.
        diameter_models: Diameter model per wood type; defaults built in.
        quadrature: Tolerances for the absorption integral.
    """
    if constant is None:
        constant = carbon.default_carbon_constant()
    if diameter_models is None:
        diameter_models = growth.default_diameter_models()

    def removal_for(size: SizeClass) -> RemovalModel:
        if removal_models is not None and size in removal_models:
            return removal_models[size]
        return removal.default_removal_model(size)

    reports: dict[SpeciesSpec, carbon.AbsorptionReport] = {}
    results = []
    for cohort in cohorts:
        spec = cohort.spec
        if spec not in reports:
            reports[spec] = expected_absorption(
                spec,
                diameter_models[spec.wood],
                removal_for(spec.size),
                constant,
                params.horizon,
                quadrature,
            )
        report = reports[spec]
        basis = (
            report.creditable
            if params.credit_mode is CreditMode.SURVIVOR_ONLY
            else report.expected_total
        )
        cohort_credit = cohort.count * basis
        results.append(
            CohortResult(
                label=cohort.label,
                count=cohort.count,
                per_tree_total=report.expected_total,
                per_tree_creditable=report.creditable,
                cohort_credit=cohort_credit,
                steward_share=allocate_steward_share(
                    cohort_credit, params.steward_years, params.horizon
                ),
            )
        )
    gross = math.fsum(r.cohort_credit for r in results)
    net = gross - params.project_emissions
    return PortfolioReport(
        per_cohort=tuple(results),
        gross_credit=gross,
        project_emissions=params.project_emissions,
        net_credit=net,
        shortfall=net < 0.0,
    )


def load_inventory(path: str | Path) -> list[PlantingCohort]:
    """Load planting cohorts from a CSV with header ``label,wood,size,count``.

    Wood and size names are case-insensitive; ``#``-prefixed and blank
    lines are skipped.

    Raises:
        ParseError: Missing columns or unparseable count (with row number).
        UnknownSpeciesError: Wood or size not among the known values.
        ValidationError: Negative count.
    """
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
    for required in ("label", "wood", "size", "count"):
        if required not in header:
            raise ParseError(f"missing column {required!r} in header")
    index = {name: header.index(name) for name in header}

    cohorts = []
    for row_number, line in enumerate(rows[1:], start=1):
        def cell(column: str) -> str:
            pos = index[column]
            if pos >= len(line):
                raise ParseError(f"missing {column} value", row=row_number)
            return line[pos].strip()

        wood_text = cell("wood").lower()
        size_text = cell("size").lower()
        try:
            wood = WoodType(wood_text)
        except ValueError:
            raise UnknownSpeciesError(
                f"row {row_number}: unknown wood type {wood_text!r}"
            ) from None
        try:
            size = SizeClass(size_text)
        except ValueError:
            raise UnknownSpeciesError(
                f"row {row_number}: unknown size class {size_text!r}"
            ) from None
        count_text = cell("count")
        try:
            count = int(count_text)
        except ValueError:
            raise ParseError(
                f"bad count {count_text!r}", row=row_number
            ) from None
        cohorts.append(
            PlantingCohort(
                spec=growth.species(wood, size),
                count=count,
                label=cell("label"),
            )
        )
    return cohorts
