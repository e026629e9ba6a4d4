from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

from drawdensity import SPHERE, GeomDrawing, load, to_combinatorial

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@functools.lru_cache(maxsize=None)
def read_fixture(name: str):
    """(Drawing, GeomDrawing or None) for a fixture file."""
    obj = load(FIXTURES / name)
    if isinstance(obj, GeomDrawing):
        return to_combinatorial(obj), obj
    return obj, None


def valid_fixture_names():
    return sorted(p.name for p in FIXTURES.iterdir() if p.name != "broken.drw")


def on_sphere(d):
    return d.replace(surface=SPHERE, outer_dart=None)


@pytest.fixture
def k4():
    return read_fixture("k4.geo")[0]


@pytest.fixture
def k4_geom():
    return read_fixture("k4.geo")[1]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.status_line(number))
