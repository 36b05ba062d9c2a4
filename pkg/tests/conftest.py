import pytest

from vlasov_shells import AnsatzParams, SolverConfig, solve

# Reference configurations shared by several test modules.
NEWTON_BALL = (AnsatzParams(0.0, 0.0, 1.0, -1.0), -1.5)
NEWTON_SHELL = (AnsatzParams(0.0, 0.0, 1.0, -1.0, L0=0.01), -1.5)
NEWTON_ANISO = (AnsatzParams(1.0, 0.5, 1.0, -1.0, L0=0.02), -1.5)
REL_BALL = (AnsatzParams(0.0, 0.0, 1.0, 1.05, regime="relativistic"), 0.0)
REL_SHELL = (AnsatzParams(0.0, 0.0, 1.0, 1.05, L0=0.01, regime="relativistic"), 0.0)
REL_ANISO = (AnsatzParams(0.5, 0.25, 1.0, 1.05, L0=0.01, regime="relativistic"), 0.0)

_ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def newton_ball():
    return solve(*NEWTON_BALL)


@pytest.fixture(scope="session")
def newton_shell():
    return solve(*NEWTON_SHELL)


@pytest.fixture(scope="session")
def newton_aniso():
    return solve(*NEWTON_ANISO)


@pytest.fixture(scope="session")
def rel_ball():
    return solve(*REL_BALL)


@pytest.fixture(scope="session")
def rel_shell():
    return solve(*REL_SHELL)


@pytest.fixture(scope="session")
def rel_aniso():
    return solve(*REL_ANISO)


@pytest.fixture(scope="session")
def small_config():
    return SolverConfig(output_grid_size=513)


@pytest.fixture(scope="session")
def acceptance_log():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(k for k in _ACCEPTANCE_LINES if isinstance(k, int)):
        terminalreporter.write_line(_ACCEPTANCE_LINES[key])
