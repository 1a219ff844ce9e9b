import pytest
from hypothesis import HealthCheck, settings

from resforge.numerics import context

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx():
    return context(192)


@pytest.fixture(scope="session")
def ctx128():
    return context(128)
