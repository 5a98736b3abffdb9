"""Shared fixtures plus the acceptance-criteria summary block.

Tests marked ``@pytest.mark.criterion(n, description)`` get one PASS/FAIL
line each at the end of the run, so the acceptance status is readable
without scrolling through the full report.
"""

import pytest

from ionbound.species import TrapConfig, builtin_registry

_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(number, description): acceptance criterion checked by this test",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, description = marker.args
    if report.when == "call":
        _CRITERIA[number] = (description, report.passed)
    elif report.when == "setup" and not report.passed:
        _CRITERIA[number] = (description, False)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        description, passed = _CRITERIA[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {description}")


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def paper_trap():
    # diffraction-limited optics with no pulse-duration margin
    return TrapConfig(f_number=1.0, safety=1.0)
