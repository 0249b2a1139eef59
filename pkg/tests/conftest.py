"""Shared fixtures; collects the one-line acceptance verdicts for the terminal summary."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

VERDICTS: dict[int, str] = {}

# (alpha, beta) in {0,1,2,4}^2, gamma in {-3/2,-1/2,0,1,2,3}
GRID = [(Fraction(a), Fraction(b), Fraction(g))
        for a, b in product((0, 1, 2, 4), repeat=2)
        for g in (Fraction(-3, 2), Fraction(-1, 2), 0, 1, 2, 3)]


def record(criterion: int, ok: bool, detail: str) -> None:
    VERDICTS[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.fixture
def verdict():
    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[k])
