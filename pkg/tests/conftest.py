import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uwbayes import UwParams, sample_dgos, scheme_lower_records, scheme_order_statistics


@pytest.fixture(scope="session")
def record_sample_15():
    """Fixed lower-record sample of length 15 from a (1, 1) parent."""
    rng = np.random.default_rng([2027, 1])
    return sample_dgos(rng, scheme_lower_records(15), UwParams(1.0, 1.0))


@pytest.fixture(scope="session")
def order_sample_15():
    """Fixed descending ordered sample of length 15 from a (1, 1) parent."""
    rng = np.random.default_rng([2026, 0])
    return sample_dgos(rng, scheme_order_statistics(15), UwParams(1.0, 1.0))


@pytest.fixture(scope="session")
def small_sample_5():
    """Fixed five-point descending sample used by the grid-search checks."""
    rng = np.random.default_rng(7)
    return sample_dgos(rng, scheme_order_statistics(5), UwParams(1.2, 0.9))
