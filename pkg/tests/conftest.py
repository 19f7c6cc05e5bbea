import numpy as np
import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(label: str, passed: bool, detail: str = "") -> None:
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())
        print(_ACCEPTANCE_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
