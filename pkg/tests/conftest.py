import pytest
from hypothesis import HealthCheck, settings

# derandomized so failures replay and CI runs are byte-stable
settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

PAIRS = [(-0.5, -0.5), (1.0, 0.0), (0.5, -0.3), (-0.7, 2.0), (-0.6, -0.8)]


@pytest.fixture(params=PAIRS, ids=lambda ab: f"a{ab[0]}b{ab[1]}")
def pair(request):
    return request.param
