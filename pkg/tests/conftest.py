"""Shared cached solves and the acceptance report hook."""

import warnings
from functools import lru_cache

import pytest

from sgbeam import oracle as orc
from sgbeam.model import BeamCase, BeamProperties, Buckling, LengthScales, Static, Vibration
from sgbeam.solve import IllPosedWarning, solve_buckling, solve_modal, solve_static

PROPS = BeamProperties()
EI = PROPS.EI
G_PAIRS = ((0.1, 0.05), (0.15, 0.1))

ACCEPTANCE_LINES = []


def case(kind, g, n=21, load=None, scheme="hermite", props=PROPS):
    return BeamCase(kind, LengthScales(*g), props, load or Static(), n, scheme)


@lru_cache(maxsize=None)
def dq_static(kind, g, n=21, scheme="hermite"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllPosedWarning)
        return solve_static(case(kind, g, n, Static(), scheme))


@lru_cache(maxsize=None)
def dq_modes(kind, g, n=21, count=6, scheme="hermite"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllPosedWarning)
        return solve_modal(case(kind, g, n, Vibration(count), scheme))


@lru_cache(maxsize=None)
def dq_buckling(kind, g, n=21, scheme="hermite"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllPosedWarning)
        return solve_buckling(case(kind, g, n, Buckling(), scheme)).critical_load


@lru_cache(maxsize=None)
def oracle_static(kind, g):
    return orc.exact_static(kind, EI, *g)


@lru_cache(maxsize=None)
def oracle_frequencies(kind, g, count=6):
    return tuple(orc.exact_frequencies(kind, EI, PROPS.m, *g, count=count).values)


@lru_cache(maxsize=None)
def oracle_buckling(kind, g):
    return orc.exact_buckling(kind, EI, *g)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Append a PASS/FAIL line for one acceptance criterion."""
    def add(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
    return add
