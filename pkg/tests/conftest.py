import pytest
from hypothesis import HealthCheck, settings

from endoring.cm.field import CMField
from endoring.cm.orders import OrderLatticeContext
from endoring.genus2.curve import Curve
from endoring.genus2.frobenius import FrobPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Q72 = 7681
F72 = (7062, 1082, 6695, 2471, 800, 1)
Q71 = 1250407
F71 = (261884, 415524, 744660, 306186, 523747, 1)


@pytest.fixture(scope="session")
def curve72():
    return Curve(Q72, F72)


@pytest.fixture(scope="session")
def chi72():
    return FrobPoly(Q72, 114, 7566)


@pytest.fixture(scope="session")
def ctx72(chi72):
    return OrderLatticeContext.from_field(CMField(chi72))


@pytest.fixture(scope="session")
def curve71():
    return Curve(Q71, F71)


@pytest.fixture(scope="session")
def chi71():
    return FrobPoly(Q71, 1251, 1772074)


@pytest.fixture(scope="session")
def ctx71(chi71):
    return OrderLatticeContext.from_field(CMField(chi71))


# ------------------------------------------------------------ acceptance summary

_AC_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "ac(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("ac")
    if m is None:
        return
    n, title = m.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _AC_RESULTS[n] = (title, rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_AC_RESULTS):
        title, ok = _AC_RESULTS[n]
        terminalreporter.write_line(f"AC{n:<3}{'PASS' if ok else 'FAIL'}  {title}")
