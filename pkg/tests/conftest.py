"""Shared fixtures, plus the acceptance-criteria summary lines.

Every ``test_cNN_*`` test in test_acceptance.py is one numbered release
criterion; the hooks below collect their outcomes and print a single
``C# PASS/FAIL — <one-line description>`` per criterion at the end of the
run, so the checklist is readable straight off the terminal output.
"""

import re

import pytest

from trdwell.potential import Units, kinematics_from_energies, square_well

_CRITERION = re.compile(r"test_acceptance\.py::test_c(\d{2})_")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    match = _CRITERION.search(report.nodeid)
    if match is None:
        return
    number = int(match.group(1))
    doc = (item.function.__doc__ or "").strip().splitlines()
    description = doc[0] if doc else item.name
    status = "PASS" if report.passed else "FAIL"
    results = getattr(item.session.config, "_acceptance_results", None)
    if results is None:
        results = {}
        item.session.config._acceptance_results = results
    results[number] = (status, description)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, description = results[number]
        terminalreporter.write_line(f"C{number} {status} — {description}")


@pytest.fixture
def units():
    return Units()


@pytest.fixture
def kin():
    # k = 0.6, kappa = 0.8, r = 4/3 with hbar = m = 1
    return kinematics_from_energies(0.18, 0.5)


@pytest.fixture
def well():
    # supports exactly two bound states at hbar = m = 1
    return square_well(1.0, 2.0)
