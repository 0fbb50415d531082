import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record a one-line verdict that is echoed in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])
    return lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
