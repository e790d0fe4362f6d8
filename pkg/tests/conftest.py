import pytest
from hypothesis import HealthCheck, settings

import pathint as pi

# numba compiles kernels on first use; never let that trip a deadline
settings.register_profile(
    "pathint",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pathint")


@pytest.fixture
def p1() -> pi.StepPath:
    """Hand-checked pilot path used throughout the tests."""
    return pi.from_samples([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 1.0, 0.5, 1.5, -1.0])


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))
