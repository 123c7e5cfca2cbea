from __future__ import annotations

from functools import lru_cache

import pytest

from eta_kspace import oracle

ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def cached_state(slots: int, pairs: int):
    return oracle.build_state(slots, pairs)


@pytest.fixture
def state():
    return cached_state


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
