import numpy as np
import pytest
import scipy.sparse as sp

from banglahate import fixture_dir

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        _ACCEPTANCE.append((number, title, rep.outcome, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title} ({duration:.2f}s)")


@pytest.fixture(scope="session")
def fixture_path():
    return fixture_dir()


@pytest.fixture
def separable_toy():
    """Class 0 rows use only feature 0, class 1 rows only feature 1."""
    X = np.array([[1, 0], [2, 0], [1, 0], [3, 0], [0, 1], [0, 2], [0, 1], [0, 3]], dtype=float)
    y = np.array([0, 0, 0, 0, 1, 1, 1, 1])
    return sp.csr_matrix(X), y


@pytest.fixture
def xor_data():
    X = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    y = np.array([0, 0, 1, 1])
    return X, y
