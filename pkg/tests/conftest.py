"""Shared fixtures and the acceptance-suite terminal summary."""

from __future__ import annotations

import pytest

_RESULTS: dict[int, tuple[str, bool, str]] = {}


def record_criterion(num: int, title: str, passed: bool,
                     detail: str = "") -> None:
    _RESULTS[num] = (title, passed, detail)


@pytest.fixture
def criterion():
    """Recorder: one pass/fail line per acceptance criterion at the end."""
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, passed, detail = _RESULTS[num]
        line = f"criterion {num:2d} [{'PASS' if passed else 'FAIL'}] {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
