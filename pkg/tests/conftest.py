import pytest

_RESULTS = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Store a one-line verdict for the acceptance summary."""
    results = request.config.stash.setdefault(_RESULTS, [])

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        results.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(results):
            terminalreporter.write_line(line)
