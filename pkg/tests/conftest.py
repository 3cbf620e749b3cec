import sys

import numpy as np
import pytest

from cataclysms import fuchsian_octagon, from_fuchsian, hitchin, horocyclic, standard_multicurve


def random_sl(rng, n, scale=0.5):
    """Random element of SL(n, R) near the identity."""
    g = np.eye(n) + scale * rng.normal(size=(n, n))
    d = np.linalg.det(g)
    if d < 0:
        g[:, 0] *= -1
        d = -d
    return g / d ** (1.0 / n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def rho0():
    return fuchsian_octagon()


@pytest.fixture(scope="session")
def fuchsian(rho0):
    return from_fuchsian(rho0)


@pytest.fixture(scope="session")
def hitchin3(rho0):
    return hitchin(rho0, 3)


@pytest.fixture(scope="session")
def horo31(rho0):
    return horocyclic(rho0, 3, 1)


@pytest.fixture(scope="session")
def pants(rho0):
    return standard_multicurve(rho0, "pants")


@pytest.fixture(scope="session")
def separating(rho0):
    return standard_multicurve(rho0, "separating")


@pytest.fixture(scope="session")
def nonseparating(rho0):
    return standard_multicurve(rho0, "nonseparating")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
