import pytest

_criterion_lines: list[str] = []


@pytest.fixture(scope="session")
def criterion_report():
    """Call with (number, passed, detail); lines are echoed at the end of the run."""

    def report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} | {detail}"
        _criterion_lines.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criterion_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
