import pytest

from toledo import constructions


@pytest.fixture(scope="session")
def fuchsian():
    return constructions.fuchsian_closed_genus2()


@pytest.fixture(scope="session")
def folded():
    return constructions.folded_torus()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
