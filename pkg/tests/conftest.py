import pytest

ACCEPTANCE_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, label): marks a test as one acceptance criterion; "
        "its outcome is echoed as a pass/fail line in the terminal summary",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    num = marker.kwargs["num"]
    label = marker.kwargs["label"]
    ACCEPTANCE_RESULTS[num] = (label, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        label, passed = ACCEPTANCE_RESULTS[num]
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {word}  {label}")
