"""Annual removal probability of street trees and derived survival terms.

The removal probability p is backed out of census aggregates under a
steady-state assumption: a constant standing stock, replanting at
``stock / assumed_lifespan`` per year, and a count of storm-felled trees
over the census window.  Survival after t years is ``(1 - p)^t``.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ValidationError
from .growth import SizeClass

__all__ = [
    "RemovalModel",
    "CensusInput",
    "derive_removal_probability",
    "survival_fraction",
    "expected_lifespan",
    "default_removal_model",
    "DEFAULT_P_TALL",
    "DEFAULT_P_MEDIUM_SHRUB",
]

Numeric = Union[float, np.ndarray]

# Census-derived defaults; the medium value is shared by shrubs.
DEFAULT_P_TALL = 0.027309
DEFAULT_P_MEDIUM_SHRUB = 0.0256977


@dataclass(frozen=True)
class RemovalModel:
    """Annual probability p that a standing tree is felled or falls."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"p must lie in (0, 1), got {self.p}")


@dataclass(frozen=True)
class CensusInput:
    """Street-tree census aggregates over a steady-state window.

    Tree counts are real numbers, not integers: census figures are
    estimates and the replanting arithmetic divides them by a lifespan.
    """

    standing_stock: float
    assumed_lifespan: float
    horizon: float
    storm_felled: float = 0.0

    def __post_init__(self):
        if self.standing_stock <= 0.0:
            raise ValidationError("standing_stock must be positive")
        if self.assumed_lifespan <= 0.0:
            raise ValidationError("assumed_lifespan must be positive")
        if self.horizon < 1.0:
            raise ValidationError("census horizon must be at least 1 year")
        if self.storm_felled < 0.0:
            raise ValidationError("storm_felled must be nonnegative")


def derive_removal_probability(census: CensusInput) -> RemovalModel:
    """Back the annual removal probability out of census aggregates.

    Procedure: annual replanting is ``standing_stock / assumed_lifespan``;
    over the census window ``planted = annual * horizon`` trees were both
    planted and (together with ``storm_felled``) removed, so the removed
    fraction of everything that stood during the window is
    ``F = (planted + storm_felled) / (standing_stock + planted)`` and the
    annual removal probability is ``p = 1 - (1 - F)^(1/horizon)``.

    Raises:
        DomainError: If the implied removals reach the whole population
            (``F >= 1``).
    """
    annual_planting = census.standing_stock / census.assumed_lifespan
    planted = annual_planting * census.horizon
    removed = planted + census.storm_felled
    fraction = removed / (census.standing_stock + planted)
    if fraction >= 1.0:
        raise DomainError(
            f"removals exceed the standing population (F = {fraction:.4f})"
        )
    return RemovalModel(p=1.0 - (1.0 - fraction) ** (1.0 / census.horizon))


def survival_fraction(model: RemovalModel, t: Numeric) -> Numeric:
    """Probability ``(1 - p)^t`` that a tree still stands after t years."""
    if np.any(np.asarray(t) < 0.0):
        raise DomainError("t must be nonnegative")
    return (1.0 - model.p) ** t


def expected_lifespan(model: RemovalModel) -> float:
    """Mean standing time in years: the integral of ``(1 - p)^t`` over
    [0, inf), i.e. ``-1 / ln(1 - p)``."""
    return -1.0 / math.log1p(-model.p)


def default_removal_model(size: SizeClass) -> RemovalModel:
    """Census-derived default removal model for a size class.

    Tall trees use p = 0.027309; medium trees and shrubs share
    p = 0.0256977.
    """
    if SizeClass(size) is SizeClass.TALL:
        return RemovalModel(DEFAULT_P_TALL)
    return RemovalModel(DEFAULT_P_MEDIUM_SHRUB)
