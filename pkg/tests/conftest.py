"""Shared fixtures: the sigma families exercised across suites and a seeded rng."""

import numpy as np
import pytest

from transvecta import SigmaMap

FAMILIES = (
    SigmaMap.identity(),
    SigmaMap.power(0.5),
    SigmaMap.power(2.0),
    SigmaMap.power(3.0),
    SigmaMap.linear_near_origin(2.0, 1.0),
    SigmaMap.sine_wobble(0.5),
)


@pytest.fixture(params=FAMILIES, ids=lambda s: s.descriptor)
def family(request) -> SigmaMap:
    return request.param


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)
