import warnings

import pytest

from railock.generator import gen_corridor, gen_junction, gen_ladder

# Unreachable-final warnings are expected in tests that commit trains to
# one branch of an alternative; keep the output clean.
warnings.filterwarnings(
    "ignore", message=".*final alternative.*unreachable.*"
)


@pytest.fixture
def corridor_long():
    """Example-1 shape: 9 unit routes, two 2.25-long trains."""
    return gen_corridor(9, 2.25, 2.25)


@pytest.fixture
def corridor_short():
    """Example-2 shape: 9 unit routes, two 0.8-long trains."""
    return gen_corridor(9, 0.8, 0.8)


@pytest.fixture
def junction():
    return gen_junction()


@pytest.fixture
def ladder2():
    return gen_ladder(2)
