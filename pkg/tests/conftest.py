import sys
from pathlib import Path

import pytest

from actioneval import ActionClass, ActionVocabulary, load_default_vocabulary

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_outcomes: dict[str, str] = {}


@pytest.fixture(scope="session")
def default_vocab() -> ActionVocabulary:
    return load_default_vocabulary()


@pytest.fixture(scope="session")
def small_vocab() -> ActionVocabulary:
    return ActionVocabulary(
        [
            ActionClass(4, "dance"),
            ActionClass(8, "sleep"),
            ActionClass(11, "sit"),
            ActionClass(12, "stand"),
            ActionClass(15, "answer phone"),
        ]
    )


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_outcomes[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[name]
        flag = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{flag:>6}  {name}")
