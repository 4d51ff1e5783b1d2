from __future__ import annotations

from functools import lru_cache

import pytest

from mesharc.algebra import mesh_algebra, socle_and_dual_basis
from mesharc.fields import FieldSpec
from mesharc.quiver import parse_quiver_spec

# lines collected by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict = {}


def algebra(spec: str, char: int = 0):
    return _algebra(spec, char)


def frobenius(spec: str, char: int = 0):
    return _frobenius(spec, char)


# positional keys so that algebra(s) and algebra(s, 0) share one object
@lru_cache(maxsize=None)
def _algebra(spec, char):
    return mesh_algebra(parse_quiver_spec(spec), FieldSpec(char))


@lru_cache(maxsize=None)
def _frobenius(spec, char):
    return socle_and_dual_basis(_algebra(spec, char))


SMALL_SPECS = [
    "preprojective A1",
    "preprojective A2",
    "preprojective A3",
    "preprojective D4",
    "quotient A2 m=2",
    "quotient A3 m=2 rho=reflection",
    "quotient A2 m=1 rho=moebius",
    "gpp G2",
    "gpp L2",
    "gpp C3",
]


@pytest.fixture(params=SMALL_SPECS)
def small_spec(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
