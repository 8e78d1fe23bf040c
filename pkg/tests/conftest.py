import random

import pytest
from hypothesis import HealthCheck, settings

# reproducibility beats coverage variety: derandomise hypothesis and expose a
# --seed option for the hand-rolled samplers
settings.register_profile(
    "det",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("det")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=0, help="seed for randomised property tests")


@pytest.fixture(scope="session")
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture()
def rng(seed):
    return random.Random(seed)


@pytest.fixture(scope="session")
def small_catalogue():
    """Every catalogue group of order <= 8."""
    from cayley_embed import groups_of_order

    return [g for n in range(1, 9) for g in groups_of_order(n)]
