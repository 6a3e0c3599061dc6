import math

import pytest

from canopy import (
    CensusInput,
    DomainError,
    RemovalModel,
    SizeClass,
    ValidationError,
    default_removal_model,
    derive_removal_probability,
    expected_lifespan,
    survival_fraction,
)

from reference_values import CENSUS_MEDIUM_SHRUB, CENSUS_TALL


class TestDerive:
    @pytest.mark.parametrize("census", [CENSUS_TALL, CENSUS_MEDIUM_SHRUB])
    def test_published_probabilities(self, census):
        stock, lifespan, window, storm, p_expected, life_expected = census
        model = derive_removal_probability(CensusInput(stock, lifespan, window, storm))
        assert model.p == pytest.approx(p_expected, rel=1e-5)
        assert expected_lifespan(model) == pytest.approx(life_expected, abs=0.01)

    def test_no_removals_limit(self):
        model = derive_removal_probability(CensusInput(1e6, 1e12, 15.0, 0.0))
        assert model.p == pytest.approx(0.0, abs=1e-10)

    def test_removals_exceeding_population(self):
        with pytest.raises(DomainError):
            derive_removal_probability(CensusInput(1e5, 35.0, 15.0, 2e5))

    def test_fraction_round_trip(self):
        census = CensusInput(*CENSUS_TALL[:4])
        model = derive_removal_probability(census)
        annual = census.standing_stock / census.assumed_lifespan
        planted = annual * census.horizon
        fraction = (planted + census.storm_felled) / (census.standing_stock + planted)
        recovered = 1.0 - (1.0 - model.p) ** census.horizon
        assert recovered == pytest.approx(fraction, rel=1e-12)

    def test_monotonicity(self):
        base = CensusInput(1e6, 35.0, 15.0, 1e4)
        p0 = derive_removal_probability(base).p
        more_storms = derive_removal_probability(CensusInput(1e6, 35.0, 15.0, 2e4)).p
        longer_lived = derive_removal_probability(CensusInput(1e6, 50.0, 15.0, 1e4)).p
        assert more_storms > p0
        assert longer_lived < p0

    def test_census_validation(self):
        with pytest.raises(ValidationError):
            CensusInput(0.0, 35.0, 15.0)
        with pytest.raises(ValidationError):
            CensusInput(1e6, -1.0, 15.0)
        with pytest.raises(ValidationError):
            CensusInput(1e6, 35.0, 0.5)
        with pytest.raises(ValidationError):
            CensusInput(1e6, 35.0, 15.0, -1.0)


class TestSurvival:
    def test_published_century_survival(self):
        assert survival_fraction(RemovalModel(0.027309), 100.0) == pytest.approx(
            0.062732089, rel=1e-6
        )
        assert survival_fraction(RemovalModel(0.0256977), 100.0) == pytest.approx(
            0.074024039, rel=1e-6
        )

    def test_at_zero(self):
        assert survival_fraction(RemovalModel(0.3), 0.0) == 1.0

    def test_multiplicative(self):
        model = RemovalModel(0.0317)
        s = lambda t: survival_fraction(model, t)
        assert s(12.5 + 31.25) == pytest.approx(s(12.5) * s(31.25), rel=1e-12)

    def test_strictly_decreasing(self):
        model = RemovalModel(0.05)
        values = [survival_fraction(model, t) for t in (0.0, 1.0, 5.0, 50.0)]
        assert values == sorted(values, reverse=True)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            survival_fraction(RemovalModel(0.05), -1.0)


class TestLifespan:
    def test_closed_form(self):
        assert expected_lifespan(RemovalModel(0.027309)) == pytest.approx(36.12, abs=0.01)
        assert expected_lifespan(RemovalModel(0.0256977)) == pytest.approx(38.41, abs=0.01)

    def test_unit_lifespan(self):
        assert expected_lifespan(RemovalModel(1.0 - math.exp(-1.0))) == pytest.approx(
            1.0, rel=1e-12
        )


class TestDefaults:
    def test_by_size_class(self):
        assert default_removal_model(SizeClass.TALL).p == 0.027309
        assert default_removal_model(SizeClass.MEDIUM).p == 0.0256977
        assert default_removal_model(SizeClass.SHRUB).p == 0.0256977

    def test_probability_bounds(self):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValidationError):
                RemovalModel(bad)
