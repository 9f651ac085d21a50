import warnings

import pytest

from ajdkit.params import HestonParams, SvcjParams, SvjParams

# benchmark parameter sets
SCENARIO1 = dict(mu=0.0319, k=6.21, theta=0.019, sigma_v=0.61, rho=-0.70, v0=0.010201)
SCENARIO2 = dict(mu=0.05, k=2.0, theta=0.09, sigma_v=1.0, rho=-0.30, v0=0.09)
SVJ = dict(mu=0.0451, k=3.99, theta=0.014, sigma_v=0.27, rho=-0.79, v0=0.008836,
           lam=0.11, mu_s=-0.139083, sigma_s=0.15)
SVCJ = dict(mu=0.0789, k=3.46, theta=0.008, sigma_v=0.14, rho=-0.82, v0=0.007569,
            lam=0.47, mu_s=-0.086539, sigma_s=0.0001, mu_v=0.05, rho_J=-0.38)

# published central moments mu_2..mu_8 for the two example moment sets
CASE1 = [0.0186180, -0.0033707, 0.0022472, -0.001222, 0.0009233, -0.0007855, 0.0007777]
CASE2 = [0.5346568, -0.3868392, 1.6363802, -3.994397, 16.5271025, -70.1374506, 365.1618607]


def make(cls, d):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return cls(**d)


@pytest.fixture(scope="session")
def scenario1():
    return make(HestonParams, SCENARIO1)


@pytest.fixture(scope="session")
def scenario2():
    return make(HestonParams, SCENARIO2)


@pytest.fixture(scope="session")
def svj_params():
    return make(SvjParams, SVJ)


@pytest.fixture(scope="session")
def svcj_params():
    return make(SvcjParams, SVCJ)


def binding(params, t):
    b = dict(params.bindings())
    b["t"] = t
    return b


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
