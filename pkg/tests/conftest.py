import pytest

from clebsch.graphs import gen_high_girth_cubic

GIRTH17_N = 60000
GIRTH17_SEED = 1

# filled by test_acceptance, printed after the run
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def girth17():
    return gen_high_girth_cubic(GIRTH17_N, 17, seed=GIRTH17_SEED)


@pytest.fixture(scope="session")
def girth17_solved(girth17):
    from clebsch.optimizer import solve

    return solve(girth17)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
