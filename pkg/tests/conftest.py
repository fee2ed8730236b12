from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent

ACCEPTANCE_LINES = []


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def diamond():
    from spectra.examples import diamond

    return diamond()


@pytest.fixture(autouse=True)
def _repo_root(monkeypatch):
    # golden and data files are addressed relative to the repository root
    monkeypatch.chdir(ROOT)
