import mpmath
import pytest
from mpmath import mpf

from zetalaurent.mpcore import make_context


@pytest.fixture
def ctx256():
    return make_context(256, mpf("1e-20"))


@pytest.fixture
def ctx512():
    return make_context(512, mpf("1e-40"))


def close(a, b, tol):
    return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) <= tol


# criterion number -> (passed, detail), filled by the acceptance suite
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
