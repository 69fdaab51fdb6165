import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import kopula as ko

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def ctx1():
    return ko.EventSetContext(1, ("x",))


@pytest.fixture
def ctx2():
    return ko.EventSetContext(2, ("x", "y"))


@pytest.fixture
def ctx3():
    return ko.EventSetContext(3, ("x", "y", "z"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
