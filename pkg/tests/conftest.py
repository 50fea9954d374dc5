"""Shared fixtures: default grids, fan discretizations, and test functions.

Session scope is used for objects that are expensive to build (forward
transforms, compiled twisted-convolution kernels) so the suite stays fast.
"""

import numpy as np
import pytest

from heisenfan import testfunctions
from heisenfan.fan import FanGrid
from heisenfan.field import GridSpec
from heisenfan.strichartz import forward


@pytest.fixture(scope="session")
def grid():
    return GridSpec(L=8.0, N=64)


@pytest.fixture(scope="session")
def fan():
    return FanGrid.build()


@pytest.fixture(scope="session")
def mod_gaussian(grid):
    """Time-modulated Gaussian: spectrum concentrated near |lambda| = 1."""
    return testfunctions.gaussian(grid)


@pytest.fixture(scope="session")
def plain_gauss(grid):
    """Unmodulated Gaussian with spectrum down to lambda = 0."""
    return testfunctions.plain_gaussian(grid)


@pytest.fixture(scope="session")
def mod_coeffs(mod_gaussian, fan, grid):
    return forward(mod_gaussian, fan, grid=grid)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance")
    lines = getattr(mod, "LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
