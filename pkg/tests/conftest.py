import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rcgen.config import Settings  # noqa: E402
from rcgen.gauge_net import Gauge  # noqa: E402


@pytest.fixture(scope="session")
def gauge():
    """The default grid eps = 2^-k, k = 4..23, rho = eps."""
    return Gauge(Settings())


@pytest.fixture(scope="session")
def small_gauge():
    """A short grid for property tests: k = 4..13."""
    return Gauge(Settings(k_min=4, k_max=13))
