from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from drawdensity import (
    CellKind,
    density_formula,
    eliminate_t_cells,
    fill,
    fill_simple,
    gen_one_planar_tight,
    gen_quasiplanar_nonhomotopic,
    gen_quasiplanar_simple,
    insert_uncrossed_edge,
    is_filled,
    is_k_planar,
    is_non_homotopic,
    is_quasiplanar,
    is_simple,
    random_geom_drawing,
    to_combinatorial,
    verify_inequality,
)
from drawdensity.errors import GenerationFailed, NOdd, NTooSmall, PreconditionFailed
from drawdensity.generators import INSIDE, chord_drawing, remove_edge, zigzag

from conftest import on_sphere, read_fixture


def pairs(d):
    return {frozenset(d.endpoints(e)) for e in d.paths}


def t6(d):
    return d.stats.count(CellKind.T6)


# -- tight families ---------------------------------------------------------------------


@pytest.mark.parametrize("n", [4, 5, 10])
def test_quasi8_small(n):
    d = gen_quasiplanar_nonhomotopic(n)
    assert len(d.vertices) == n and len(d.paths) == 8 * n - 20
    assert is_quasiplanar(d) and is_non_homotopic(d) and d.is_connected()


def test_quasi8_n25():
    d = gen_quasiplanar_nonhomotopic(25)
    assert len(d.paths) == 180
    assert density_formula(d, 5).residual == 0
    r = verify_inequality(d, "BOUND(quasiplanar)")
    assert r.tight


def test_quasi8_too_small():
    with pytest.raises(NTooSmall):
        gen_quasiplanar_nonhomotopic(3)


@pytest.mark.parametrize("n", [16, 18])
def test_quasi65(n):
    d = gen_quasiplanar_simple(n)
    assert len(d.paths) == 13 * n // 2 - 20
    assert is_simple(d) and is_quasiplanar(d) and d.is_connected()


def test_quasi65_preconditions():
    with pytest.raises(NOdd):
        gen_quasiplanar_simple(7)
    with pytest.raises(NTooSmall):
        gen_quasiplanar_simple(6)


def test_quasi65_below_sixteen_is_reported():
    # a simple drawing has no parallel edges, and 6.5*8 - 20 > C(8, 2)
    assert 13 * 8 // 2 - 20 > comb(8, 2)
    for n in (8, 10, 12, 14):
        with pytest.raises(GenerationFailed):
            gen_quasiplanar_simple(n)


@pytest.mark.parametrize("n", [8, 20])
def test_one_planar(n):
    d = gen_one_planar_tight(n)
    assert len(d.paths) == 4 * n - 8
    assert is_k_planar(d, 1) and is_non_homotopic(d)
    assert density_formula(d, 5).residual == 0
    assert verify_inequality(d, "BOUND(1-planar)").tight


def test_one_planar_preconditions():
    with pytest.raises(NOdd):
        gen_one_planar_tight(9)
    with pytest.raises(NTooSmall):
        gen_one_planar_tight(6)


def test_zigzag_classes():
    z = zigzag(10, 0)
    assert all(min(abs(a - b), 10 - abs(a - b)) >= 3 for a, b in map(tuple, z))
    assert {sum(p) % 10 for p in z} <= {0, 1}
    assert len(z) == 10 - 5


def test_chord_drawing_single_chord():
    d = chord_drawing(4, [("x", [(INSIDE, 0, 4)])])
    assert len(d.paths) == 5 and not d.crossings


# -- surgeries --------------------------------------------------------------------------


def test_fill_cycle4():
    d, _ = read_fixture("cycle4.geo")
    assert not is_filled(d)
    out = fill(d)
    assert is_filled(out) and is_non_homotopic(out)
    assert pairs(d) <= pairs(out) and len(out.paths) > len(d.paths)


def test_fill_identity_on_filled():
    tri, _ = read_fixture("triangle.geo")
    assert fill(tri) == tri
    d = gen_one_planar_tight(8)
    assert fill(d) == d


def test_fill_k4_joins_a_diagonal_pair(k4):
    # the outer cell meets all four corners while the diagonals are crossed
    v = is_filled(k4)
    assert not v
    out = fill(k4)
    assert len(out.paths) == 7 and is_filled(out) and is_non_homotopic(out)
    added = [e for e in out.paths if e not in k4.paths]
    assert [len(out.paths[e]) for e in added] == [2]
    assert fill(out) == out


def test_fill_preconditions():
    bigon, _ = read_fixture("bigon.drw")
    with pytest.raises(PreconditionFailed):
        fill(bigon)


def test_fill_simple_reroutes_octahedron_edge():
    d, _ = read_fixture("octahedron_detour.geo")
    assert is_simple(d) and len(d.crossings) == 2
    out = fill_simple(d)
    assert is_simple(out) and is_filled(out) and is_quasiplanar(out)
    assert len(out.paths) == 12 and not out.crossings
    assert pairs(out) == pairs(d)
    assert fill_simple(out) == out


def test_fill_simple_preconditions():
    star, _ = read_fixture("star.geo")
    with pytest.raises(PreconditionFailed):
        fill_simple(star)
    lens, _ = read_fixture("witnessed_lens.geo")
    with pytest.raises(PreconditionFailed):
        fill_simple(lens)


def test_eliminate_planar_k4():
    d, _ = read_fixture("k4_planar.geo")
    assert t6(d) == 4 and is_filled(d)
    out = eliminate_t_cells(d)
    assert t6(out) == 0
    assert is_non_homotopic(out) and is_quasiplanar(out) and is_filled(out)
    assert pairs(d) <= pairs(out)
    assert eliminate_t_cells(out) == out


def test_eliminate_identity_without_t_cells():
    d = gen_quasiplanar_nonhomotopic(7)
    assert t6(d) == 0 and is_filled(d)
    assert eliminate_t_cells(d) == d


def test_eliminate_after_fill_on_generator():
    d = fill(gen_quasiplanar_nonhomotopic(6))
    out = eliminate_t_cells(d)
    assert t6(out) == 0 and len(out.paths) >= len(d.paths)


def test_eliminate_preconditions():
    d, _ = read_fixture("cycle4.geo")
    with pytest.raises(PreconditionFailed):
        eliminate_t_cells(d)


def test_insert_and_remove_are_inverse():
    d, _ = read_fixture("cycle4.geo")
    cell = next(c for c in d.cells if not c.unbounded)
    grown = insert_uncrossed_edge(d, cell, "a", "c", eid="ac")
    assert len(grown.cells) == 3
    assert remove_edge(grown, "ac") == d


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(1, 100_000), n=st.integers(4, 8), bends=st.integers(0, 2), sphere=st.booleans())
def test_surgery_postconditions(seed, n, bends, sphere):
    d = to_combinatorial(random_geom_drawing(seed, n=n, p=0.5, bends=bends))
    if sphere:
        d = on_sphere(d)
    if not (is_non_homotopic(d) and is_quasiplanar(d)):
        return
    f = fill(d)
    assert is_filled(f) and is_non_homotopic(f) and is_quasiplanar(f)
    assert pairs(d) <= pairs(f) and fill(f) == f
    e = eliminate_t_cells(f)
    assert t6(e) == 0 and is_filled(e) and is_non_homotopic(e) and is_quasiplanar(e)
    assert pairs(f) <= pairs(e) and eliminate_t_cells(e) == e
