import os

import pytest
from hypothesis import HealthCheck, settings

from unimargin.io import load_fixture

settings.register_profile("default", deadline=None, suppress_health_check=(HealthCheck.too_slow,))
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def yule_doc():
    return load_fixture("yule")


@pytest.fixture(scope="session")
def agresti_doc():
    return load_fixture("agresti")


@pytest.fixture(scope="session")
def fienberg_doc():
    return load_fixture("fienberg")


_acceptance = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
