from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))


@pytest.fixture(scope="session")
def frozen() -> dict:
    return json.loads((HERE / "data" / "frozen.json").read_text())


VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance verdict line; all lines are printed in the summary."""

    def _verdict(number: int, ok: bool, note: str) -> None:
        VERDICTS.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} | {note}")

    return _verdict


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
