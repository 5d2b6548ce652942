import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from archimax import ArchimaxCopula, ExponentialWilliamson, comonotone_pickands, independence_pickands
from archimax.verify import (
    cantor_pickands,
    cantor_williamson,
    discrete_pickands,
    discrete_williamson,
    mixed_pickands,
    mixed_williamson,
    smooth_pickands,
)


@pytest.fixture(scope="session")
def exp_gamma():
    return ExponentialWilliamson()


@pytest.fixture(scope="session")
def pi_copula():
    return ArchimaxCopula.from_measures(ExponentialWilliamson(), independence_pickands())


@pytest.fixture(scope="session")
def m_copula():
    return ArchimaxCopula.from_measures(ExponentialWilliamson(), comonotone_pickands())


@pytest.fixture(scope="session")
def exp_mixed():
    """exp generator with the piecewise Pickands function (L = 1/8, R = 3/4)."""
    return ArchimaxCopula.from_measures(ExponentialWilliamson(), mixed_pickands())


@pytest.fixture(scope="session")
def mixed_pair():
    """Non-strict piecewise generator (phi(0) = 8) with the piecewise Pickands function."""
    return ArchimaxCopula.from_measures(mixed_williamson(), mixed_pickands())


@pytest.fixture(scope="session")
def discrete_pair():
    return ArchimaxCopula.from_measures(discrete_williamson(), discrete_pickands())


@pytest.fixture(scope="session")
def cantor_pi():
    return ArchimaxCopula.from_measures(cantor_williamson(), independence_pickands())


@pytest.fixture(scope="session")
def exp_smooth():
    return ArchimaxCopula.from_measures(ExponentialWilliamson(), smooth_pickands())


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run
# ---------------------------------------------------------------------------
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
