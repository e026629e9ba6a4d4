from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from drawdensity import (
    CATALOG_IDS,
    check_catalog,
    density_formula,
    gen_one_planar_tight,
    gen_quasiplanar_nonhomotopic,
    geometric_cells,
    max_edges,
    parse_drw,
    random_geom_drawing,
    to_combinatorial,
    verify_inequality,
)
from drawdensity.errors import NTooSmall, PreconditionFailed, UnknownClass

from conftest import read_fixture, valid_fixture_names

T_SWEEP = [Fraction(t) for t in (1, 2, 3, 4, 5, 6)] + [Fraction(2 * k, 2 * k - 4) for k in range(3, 7)]


def oracle_rhs(n_v, n_x, sizes, t):
    t = Fraction(t)
    return t * (n_v - 2) - sum((t - 1) / 4 * s - t for s in sizes) - n_x


def test_k4_values(k4):
    ev = density_formula(k4, 5)
    assert ev.n_edges == 6 and ev.residual == 0
    assert (ev.c3, ev.c4, ev.c5, ev.excess) == (0, 0, 4, 3)
    assert ev.r == 5
    assert ev.decompositions[4]["holds"] and ev.decompositions[5]["holds"]


def test_t_equals_one_branch():
    d, _ = read_fixture("twoedges.geo")
    ev = density_formula(d, 1)
    # with t = 1 the cell term is -|C| and the identity is Euler's formula
    assert ev.cell_sum == -len(d.cells)
    assert ev.residual == 0 and ev.r is None


def test_density_needs_an_edge():
    d = parse_drw("surface sphere\nvertex a\n")
    with pytest.raises(PreconditionFailed):
        density_formula(d, 5)


@pytest.mark.parametrize("name", [n for n in valid_fixture_names() if n.endswith(".geo")])
def test_identity_on_fixtures_against_geometric_sizes(name):
    d, g = read_fixture(name)
    sizes = [a + b for a, b in geometric_cells(g)]
    for t in T_SWEEP:
        ev = density_formula(d, t)
        assert ev.residual == 0
        assert ev.rhs == oracle_rhs(len(d.vertices), len(d.crossings), sizes, t)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(1, 100_000), n=st.integers(3, 9), bends=st.integers(0, 2))
def test_identity_on_random_drawings(seed, n, bends):
    g = random_geom_drawing(seed, n=n, p=0.5, bends=bends)
    d = to_combinatorial(g)
    sizes = [a + b for a, b in geometric_cells(g)]
    for t in T_SWEEP:
        assert d.paths and density_formula(d, t).rhs == len(d.paths) == oracle_rhs(
            len(d.vertices), len(d.crossings), sizes, t
        )


def test_max_edges_table():
    assert max_edges("2-planar", "non-homotopic", n=10) == 40
    assert max_edges("2-bend RAC", "non-homotopic", n=10) == 81
    assert max_edges("k+-real-face", k=4, n=10) == 16
    assert max_edges("1-planar", n=10) == 32
    assert max_edges("quasiplanar", "simple", n=9) == Fraction(77, 2)
    with pytest.raises(UnknownClass):
        max_edges("3-planar", n=10)
    with pytest.raises(UnknownClass):
        max_edges("quasiplanar", "bogus", n=10)
    with pytest.raises(NTooSmall):
        max_edges("quasiplanar", "simple", n=3)


def test_k4_catalog_entries(k4):
    r = verify_inequality(k4, "A_LE_X")
    assert (r.lhs, r.rhs, r.holds) == (0, 1, True)
    r = verify_inequality(k4, "BOUND(1-planar)")
    assert (r.lhs, r.rhs, r.holds, r.tight) == (6, 8, True, False)


def test_bound_equality_on_g10():
    d = gen_quasiplanar_nonhomotopic(10)
    r = verify_inequality(d, "BOUND", {"class": "quasiplanar", "variant": "non-homotopic"})
    assert (r.lhs, r.rhs) == (60, 60)
    assert r.holds and r.tight


def test_one_planar_equality():
    r = verify_inequality(gen_one_planar_tight(8), "BOUND(1-planar)")
    assert (r.lhs, r.rhs, r.tight) == (24, 24, True)


def test_strict_and_report_modes():
    d, _ = read_fixture("bigon.drw")
    with pytest.raises(PreconditionFailed):
        verify_inequality(d, "B_GEN")
    r = verify_inequality(d, "B_GEN", strict=False)
    assert not r.applicable and r.holds is None
    with pytest.raises(KeyError):
        verify_inequality(d, "NOPE")


def test_catalog_covers_every_entry(k4):
    ids = {r.id.split("(")[0] for r in check_catalog(k4)}
    assert ids == set(CATALOG_IDS)


@pytest.mark.parametrize("name", valid_fixture_names())
def test_catalog_holds_on_fixtures(name):
    d, g = read_fixture(name)
    for r in check_catalog(d, g):
        if r.id == "LINK":
            continue
        assert r.holds is not False, (r.id, r.witness)
