from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import settings

from qorbit.module_action import build_module
from qorbit.series_data import build_cell, build_series

settings.register_profile("qorbit", max_examples=40, deadline=None)
settings.load_profile("qorbit")

# every (series, rank) pair exercised by the catalog sweep
ALL_SPECS = [("B", 1), ("B", 2), ("B", 3), ("C", 1), ("C", 2), ("C", 3), ("D", 2), ("D", 3), ("D", 4)]

# (series, rank, r, sigma) instances of the module suite
MODULE_INSTANCES = [
    ("B", 1, "1", "1/2"),
    ("B", 1, "1", "1"),
    ("B", 2, "1", "1/2"),
    ("B", 2, "2", "1"),
    ("C", 1, "1/2", "1"),
    ("C", 1, "1/2", "2"),
    ("C", 2, "1/2", "1"),
    ("D", 2, "1/2", "1/2"),
    ("D", 2, "3/2", "1"),
]


def spec_cell(series, rank, r=None):
    spec = build_series(series, rank)
    return spec, (None if r is None else build_cell(spec, Fraction(r)))


@lru_cache(maxsize=None)
def module(series, rank, r, sigma):
    spec, cell = spec_cell(series, rank, r)
    return build_module(spec, cell, Fraction(sigma))


def instance_id(inst):
    s, l, r, sg = inst
    return f"{s}{l}-r{r}-s{sg}"


@pytest.fixture(scope="session")
def c1():
    return spec_cell("C", 1, "1/2")


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
