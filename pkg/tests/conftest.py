import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# numeric-heavy properties blow the default deadline on slow machines
settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
