#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import numpy as np
import pytest

from Boltzmann.admissibility import solve_admissibility
from Boltzmann.presets import preset
from Boltzmann.weights import WeightSequence
from Branching.offspring_law import OffspringLaw
from example_data_provider import get_example_data


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def toy2() -> OffspringLaw:
    return OffspringLaw.from_json(get_example_data("TOY2"))


@pytest.fixture(scope="session")
def mono2() -> OffspringLaw:
    return OffspringLaw.from_json(get_example_data("MONO2"))


@pytest.fixture(scope="session")
def quadrangulation_weights() -> WeightSequence:
    return preset("even", {"p": 2})


@pytest.fixture(scope="session")
def quadrangulation(quadrangulation_weights):
    return solve_admissibility(quadrangulation_weights)


@pytest.fixture(scope="session")
def uipm():
    return solve_admissibility(preset("uipm"))


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("BMT_CACHE_FILE", str(tmp_path / "cache.json"))
