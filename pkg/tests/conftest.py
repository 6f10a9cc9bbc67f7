import pytest

from localglobal.elliptic import RationalCurve


@pytest.fixture
def e_x3_plus_1():
    return RationalCurve(0, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
