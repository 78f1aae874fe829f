import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import VOCAB5, make_video

_adapter_outcomes: dict[str, str] = {}


@pytest.fixture(scope="session")
def vocab5_file(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("vocab") / "vocab5.csv"
    path.write_text(VOCAB5)
    return path


@pytest.fixture(scope="session")
def synthetic_videos(tmp_path_factory) -> dict[str, Path]:
    root = tmp_path_factory.mktemp("videos")
    return {
        "clipA": make_video(root / "clipA.avi"),
        "clipB": make_video(root / "clipB.avi"),
    }


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_adapter_acceptance.py" in report.nodeid:
        _adapter_outcomes[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _adapter_outcomes:
        return
    terminalreporter.section("adapter acceptance")
    for name in sorted(_adapter_outcomes):
        outcome = _adapter_outcomes[name]
        flag = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{flag:>6}  {name}")
