import math

import numpy as np
import pytest

from cuspmap import LogSeriesCoefficients, chr_expand

ALPHAS = (1.0, math.pi, 2 * math.pi)
N_RANDOM = 20


def random_series(seed, n_max=8, k_max=16, a=1.0):
    """Admissible series with geometrically decaying random coefficients."""
    rng = np.random.default_rng(seed)
    n = np.arange(1, n_max + 1)[:, None]
    k = np.arange(k_max + 1)[None, :]
    c = rng.uniform(-1, 1, (n_max, k_max + 1)) * 0.5 ** (n - 1) * 0.5**k
    c[0, 0] = rng.uniform(0.5, 2.0)
    return LogSeriesCoefficients(a=a, c=c)


def corpus():
    """(label, series) pairs used by the corpus-wide checks."""
    items = [(f"arc-{a:.4g}", chr_expand(a)) for a in ALPHAS]
    items.append(("c10-only", LogSeriesCoefficients.zeros().with_coefficients({(1, 0): 1.0})))
    items += [(f"random-{i}", random_series(i)) for i in range(N_RANDOM)]
    return items


@pytest.fixture(scope="session")
def arc2pi():
    return chr_expand(2 * math.pi)


@pytest.fixture(scope="session")
def zero_series():
    return LogSeriesCoefficients.zeros()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
