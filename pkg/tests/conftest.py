from importlib import resources

import pytest

from heffter.io import read_array


def fixture_path(name):
    return str(resources.files("heffter").joinpath("fixtures", name))


def load(name):
    return read_array(fixture_path(name))


@pytest.fixture
def h12():
    return load("h_12_3.grid").array


@pytest.fixture
def h6_12():
    return load("h_6_12_6_3.grid").array


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE = {}


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
