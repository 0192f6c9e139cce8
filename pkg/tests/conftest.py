import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(20260416)


def random_state(rng, dims):
    from mixedstab import StateVector

    total = int(np.prod(dims))
    v = rng.normal(size=total) + 1j * rng.normal(size=total)
    return StateVector(dims, v / np.linalg.norm(v))
