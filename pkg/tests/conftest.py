import numpy as np
import pytest

from osmodes.langer import CriticalLayerFrame, MasterGrid
from osmodes.profile import ShearProfile


@pytest.fixture(scope="session")
def expo():
    return ShearProfile("exponential")


@pytest.fixture(scope="session")
def blasius():
    return ShearProfile("blasius")


@pytest.fixture(scope="session")
def frame(expo):
    """A frame close to the unstable root at alpha = 0.1, R = 1e5."""
    return CriticalLayerFrame(expo, 0.1, 1e5, 0.1288 + 0.0009j)


@pytest.fixture(scope="session")
def mgrid(frame):
    return MasterGrid(frame)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects (criterion, passed, detail) lines for the end-of-run summary."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
