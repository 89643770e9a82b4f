import math

import numpy as np
import pytest

from pottssos.extremality import find_threshold

THETA_C = 7.729813674618526


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


def random_params(rng, n, lo=0.05, hi=10.0):
    """``n`` points drawn uniformly from ``(lo, hi]^2``."""
    return [(float(t), float(r)) for t, r in rng.uniform(lo, hi, size=(n, 2))]


@pytest.fixture(scope="session")
def theta_c():
    return find_threshold("theta_c").value


SQRT2 = math.sqrt(2.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in list(sys.modules.items())
                if name.endswith("test_acceptance") and hasattr(m, "ACCEPTANCE_RESULTS")), None)
    if mod is None or not mod.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.ACCEPTANCE_RESULTS):
        terminalreporter.write_line(mod.ACCEPTANCE_RESULTS[n])
