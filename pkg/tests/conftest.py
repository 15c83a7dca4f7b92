import pytest

_ACCEPTANCE_LINES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance" in item.nodeid:
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE_LINES[item.name] = f"{doc}: {'PASS' if report.passed else 'FAIL'}"


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[name])
