import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from canopy import (
    all_species,
    default_carbon_constant,
    default_diameter_models,
    default_removal_model,
    species,
)


@pytest.fixture(scope="session")
def models():
    return default_diameter_models()


@pytest.fixture(scope="session")
def constant():
    return default_carbon_constant()


@pytest.fixture(scope="session")
def nine_specs():
    return all_species()


def spec_for(wood: str, size: str):
    return species(wood, size)


def removal_for(size: str):
    return default_removal_model(size)
