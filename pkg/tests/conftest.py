import pytest

ACCEPTANCE_LINES = []


class Recorder:
    """Prints one PASS/FAIL line per acceptance criterion and asserts it."""

    def __init__(self, sink):
        self.sink = sink

    def __call__(self, number, title, passed, measured, tolerance):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2} {title}: measured {measured}; tolerance {tolerance}"
        self.sink.append(line)
        print(line)
        assert passed, line


@pytest.fixture
def criterion():
    return Recorder(ACCEPTANCE_LINES)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
