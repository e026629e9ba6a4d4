from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from drawdensity import (
    dump_drw,
    dump_geo,
    gen_quasiplanar_nonhomotopic,
    load,
    parse_drw,
    parse_geo,
    random_geom_drawing,
    to_combinatorial,
)
from drawdensity.errors import DanglingCrossing, ParseError, UnknownVertex

from conftest import fixture_path, on_sphere, read_fixture, valid_fixture_names


@pytest.mark.parametrize("name", valid_fixture_names())
def test_fixtures_round_trip(name):
    d, _ = read_fixture(name)
    assert parse_drw(dump_drw(d)) == d


def test_drw_transcription_matches_geo():
    for name in ("k4", "triangle", "twoedges"):
        assert load(fixture_path(f"{name}.drw")) == read_fixture(f"{name}.geo")[0]


def test_generator_output_round_trips():
    d = gen_quasiplanar_nonhomotopic(7)
    assert parse_drw(dump_drw(d)) == d


def test_broken_fixture():
    with pytest.raises(UnknownVertex):
        load(fixture_path("broken.drw"))


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("surface torus\n", 1, 1),
        ("surface sphere\nvertex a@b\n", 2, 8),
        ("surface sphere\nvertex a\nvertex b\nedge e a b over x\n", 4, 12),
        ("surface sphere\nfrobnicate\n", 2, 1),
        ("vertex a\n", 1, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_drw(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_declared_crossing_must_match():
    d, _ = read_fixture("k4.drw")
    text = dump_drw(d).replace("cross x1 ac bd", "cross x1 ac cd")
    with pytest.raises(DanglingCrossing):
        parse_drw(text)


def test_geo_rationals_and_bends():
    g = parse_geo("vertex a 1/2 0\nvertex b 3 -1/3\nedge e a b via 1/2/5/3\n")
    assert g.vertices["a"] == (Fraction(1, 2), 0)
    assert g.edges["e"][1] == (Fraction(1, 2), Fraction(5, 3))
    assert parse_geo(dump_geo(g)) == g


def test_sphere_dump_has_no_outer_dart(k4):
    assert "outerdart" in dump_drw(k4)
    assert "outerdart" not in dump_drw(on_sphere(k4))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(1, 100_000), n=st.integers(3, 8), bends=st.integers(0, 2))
def test_drw_round_trip_random(seed, n, bends):
    d = to_combinatorial(random_geom_drawing(seed, n=n, p=0.5, bends=bends))
    assert parse_drw(dump_drw(d)) == d
    assert parse_drw(dump_drw(on_sphere(d))) == on_sphere(d)
