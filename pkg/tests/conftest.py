import numpy as np
import pytest
from hypothesis import settings

from sigma3.curve import make_curve
from sigma3.theta_sigma import build_context

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

STOCK = {
    "x7p1": (1, 0, 0, 0, 0, 0, 0),
    "real_roots": (0, -36, 0, 49, 0, -14, 0),
}
# every lambda_i non-zero, so no Taylor target is trivially 0
GENERIC = (2, -1, "1/2", 3, -1, 1, "-1/3")


@pytest.fixture(scope="session")
def curves():
    return {name: make_curve(*lam) for name, lam in STOCK.items()}


@pytest.fixture(scope="session")
def contexts(curves):
    return {name: build_context(c) for name, c in curves.items()}


@pytest.fixture(scope="session", params=sorted(STOCK))
def ctx(request, contexts):
    return contexts[request.param]


@pytest.fixture(scope="session")
def generic_ctx():
    return build_context(make_curve(*GENERIC))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
