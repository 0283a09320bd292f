import numpy as np
import pytest

from qfa_lab.constructions import build_k2, build_k3, parity_qfa
from qfa_lab.dfa import build_g1, build_g2, build_g3, even_a_dfa


@pytest.fixture(scope="session")
def k2():
    return build_k2()


@pytest.fixture(scope="session")
def k3():
    return build_k3()


@pytest.fixture(scope="session")
def parity():
    return parity_qfa()


@pytest.fixture(scope="session")
def g1():
    return build_g1()


@pytest.fixture(scope="session")
def g2():
    return build_g2()


@pytest.fixture(scope="session")
def g3():
    return build_g3()


@pytest.fixture(scope="session")
def even_a():
    return even_a_dfa()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, label = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if failed or n not in _CRITERIA:
        _CRITERIA[n] = (label, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        label, result = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {result}: {label}")
