"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly as a script.
"""
from __future__ import annotations

import functools
import sys
import time
from collections import Counter
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from drawdensity import (  # noqa: E402
    CellKind,
    check_catalog,
    density_formula,
    eliminate_t_cells,
    fill,
    fill_simple,
    gen_one_planar_tight,
    gen_quasiplanar_nonhomotopic,
    gen_quasiplanar_simple,
    geometric_cells,
    is_filled,
    is_k_planar,
    is_non_homotopic,
    is_quasiplanar,
    is_rac,
    is_simple,
    link_is_regular,
    link_of_vertex,
    verify_inequality,
)
from drawdensity.cli import fuzz_drawings  # noqa: E402
from drawdensity.errors import GenerationFailed  # noqa: E402

from conftest import on_sphere, read_fixture, valid_fixture_names  # noqa: E402

T_VALUES = [Fraction(t) for t in (1, 2, 3, 4, 5, 6)] + [Fraction(2 * k, 2 * k - 4) for k in range(3, 7)]
FUZZ_SEEDS = range(1, 201)

# which k each RAC fixture admits, fixed when the fixtures were drawn
RAC_TABLE = {
    "rac0_square.geo": {0, 1, 2},
    "rac0_kite.geo": {0, 1, 2},
    "rac0_grid.geo": {0, 1, 2},
    "k4.geo": {0, 1, 2},
    "rac1_ell.geo": {1, 2},
    "rac1_square.geo": {1, 2},
    "rac2_zig.geo": {2},
    "nonrac_kite.geo": set(),
}

RESULTS: dict = {}


def record(number, ok, detail):
    RESULTS[number] = (ok, detail)
    return ok


def fuzz_n(seed):
    return 4 + seed % 7


# -- corpus -------------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def fixtures():
    """(label, drawing, geom) for every fixture on its own surface and on the sphere."""
    out = []
    for name in valid_fixture_names():
        d, g = read_fixture(name)
        out.append((name, d, g))
        if d.surface != "sphere":
            out.append((f"{name}@sphere", on_sphere(d), None))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def fuzzed():
    out = []
    for seed in FUZZ_SEEDS:
        g, plane, sphere = fuzz_drawings(seed, fuzz_n(seed))
        out.append((f"seed{seed}", plane, g))
        out.append((f"seed{seed}@sphere", sphere, None))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def generated():
    out = []
    for n in range(4, 11):
        out.append((f"quasi8({n})", gen_quasiplanar_nonhomotopic(n), None))
    for n in (16, 18):
        out.append((f"quasi65({n})", gen_quasiplanar_simple(n), None))
    for n in (8, 10, 12):
        out.append((f"oneplanar({n})", gen_one_planar_tight(n), None))
    return tuple(out)


def _three_connected(d):
    g = nx.Graph()
    g.add_nodes_from(d.vertices)
    g.add_edges_from(d.endpoints(e) for e in d.paths)
    return len(g) >= 4 and nx.node_connectivity(g) >= 3


@functools.lru_cache(maxsize=None)
def surgery_runs():
    """Every fill / fill_simple / eliminate_t_cells application on the base corpus.

    Returns (label, operation, input, output, output of a second application).
    """
    runs = []
    for label, d, _ in fixtures() + fuzzed() + generated():
        if is_non_homotopic(d) and is_quasiplanar(d):
            f = fill(d)
            runs.append((label, "fill", d, f, fill(f)))
            if d.is_connected() and len(d.vertices) >= 4:
                e = eliminate_t_cells(f)
                runs.append((label, "eliminate_t_cells", f, e, eliminate_t_cells(e)))
        if is_simple(d) and is_quasiplanar(d) and _three_connected(d):
            s = fill_simple(d)
            runs.append((label, "fill_simple", d, s, fill_simple(s)))
    return tuple(runs)


def images():
    return tuple((f"{op}[{label}]", out, None) for label, op, _, out, _ in surgery_runs())


def full_corpus():
    return fixtures() + fuzzed() + generated() + images()


def pairs(d):
    return {frozenset(d.endpoints(e)) for e in d.paths}


# -- criteria -----------------------------------------------------------------------------


def criterion_1():
    start = time.perf_counter()
    bad = []
    checked = 0
    for label, d, _ in fixtures() + fuzzed():
        if not (d.is_connected() and d.paths):
            continue
        checked += 1
        for t in T_VALUES:
            if density_formula(d, t).residual != 0:
                bad.append((label, t))
    secs = time.perf_counter() - start
    ok = not bad and secs < 30
    return record(1, ok, f"{checked} drawings x {len(T_VALUES)} values of t, nonzero residuals: {len(bad)}, {secs:.1f}s")


def criterion_2():
    start = time.perf_counter()
    bad = []
    for n in range(4, 26):
        d = gen_quasiplanar_nonhomotopic(n)
        if not (len(d.paths) == 8 * n - 20 and is_non_homotopic(d) and is_quasiplanar(d) and d.is_connected()):
            bad.append(f"quasi8({n})")
    for n in range(8, 25, 2):
        try:
            d = gen_quasiplanar_simple(n)
        except GenerationFailed:
            bad.append(f"quasi65({n}) not built")
            continue
        if not (len(d.paths) == 13 * n // 2 - 20 and is_simple(d) and is_quasiplanar(d)):
            bad.append(f"quasi65({n})")
    for n in range(8, 25, 2):
        d = gen_one_planar_tight(n)
        r = verify_inequality(d, "BOUND(1-planar)")
        if not (len(d.paths) == 4 * n - 8 and is_k_planar(d, 1) and is_non_homotopic(d) and r.tight):
            bad.append(f"oneplanar({n})")
    secs = time.perf_counter() - start
    ok = not bad and secs < 60
    return record(2, ok, f"failing: {', '.join(bad) or 'none'}; {secs:.1f}s")


def criterion_3():
    violations = []
    applicable = Counter()
    corpus = full_corpus()
    for label, d, g in corpus:
        for r in check_catalog(d, g):
            if r.id == "LINK" or not r.applicable:
                continue
            applicable[r.id.split("(")[0]] += 1
            if not r.holds:
                violations.append((label, r.id, r.witness))
    summary = ", ".join(f"{k}:{v}" for k, v in sorted(applicable.items()))
    return record(3, not violations, f"{len(corpus)} drawings, violations: {len(violations)} (applicable runs {summary})")


def _link_base(d):
    return d.is_connected() and len(d.vertices) >= 3 and is_non_homotopic(d)


def criterion_4():
    checked = 0
    mismatches = []
    for label, d, _ in full_corpus():
        if not _link_base(d):
            continue
        for v in d.vertices:
            checked += 1
            res = link_of_vertex(d, v, check=False)
            if not res.holds:
                mismatches.append((label, v, link_is_regular(d, v)))
    regular = sum(1 for m in mismatches if m[2])
    return record(
        4,
        not mismatches,
        f"{checked} vertices, mismatches: {len(mismatches)} "
        f"({len(mismatches) - regular} at irregular vertices, {regular} at regular ones)",
    )


def criterion_5():
    total = 0
    bad = []
    allowed = {3: {CellKind.TRI3}, 4: {CellKind.A4, CellKind.Q4}, 5: {CellKind.D5, CellKind.W5, CellKind.P5}}
    for label, d, _ in full_corpus():
        if not _link_base(d):
            continue
        for c in d.cells:
            if c.size in allowed:
                total += 1
                if c.kind not in allowed[c.size]:
                    bad.append((label, c))
    return record(5, not bad, f"{total} cells of size 3-5, unclassified: {len(bad)}")


def criterion_6():
    bad = []
    count = 0
    for label, d, g in fuzzed():
        if g is None:
            continue
        count += 1
        combinatorial = sorted((c.vertex_incidences, c.segment_incidences) for c in d.cells)
        if geometric_cells(g) != combinatorial:
            bad.append(label)
    ok = count >= 200 and not bad
    return record(6, ok, f"{count} geometric drawings, disagreements: {len(bad)}")


def _outer_crossed_segments(d, cell):
    n = 0
    for e, node, s in cell.darts:
        p = d.paths[e]
        if len(p) == 2:
            continue
        head = d.head((e, node, s))
        if d.is_vertex(node) or d.is_vertex(head):
            n += 1
    return n


def criterion_7():
    problems = []
    k_seen = set()
    for name, expected in RAC_TABLE.items():
        d, g = read_fixture(name)
        got = {k for k in (0, 1, 2) if is_rac(g, k)}
        if got != expected:
            problems.append(f"{name}: is_rac says {sorted(got)}")
        if expected:
            k_seen.add(min(expected))
        if 0 in got:
            for c in d.cells:
                if c.kind in (CellKind.TRI3, CellKind.A4, CellKind.P5):
                    problems.append(f"{name}: {c.kind.name} cell in a RAC(0) drawing")
                if c.kind in (CellKind.D5, CellKind.W5) and _outer_crossed_segments(d, c) != 2:
                    problems.append(f"{name}: {c.kind.name} cell without two outer crossed segments")
        for k in (1, 2):
            if k in got:
                r = verify_inequality(d, "RAC_K", {"k": k, "geom": g}, strict=False)
                if r.applicable and not r.holds:
                    problems.append(f"{name}: RAC_K({k}) violated")
                if not r.applicable:
                    problems.append(f"{name}: RAC_K({k}) preconditions {r.preconditions}")
    fixtures_with_rac = sum(1 for v in RAC_TABLE.values() if v)
    ok = not problems and fixtures_with_rac >= 5 and k_seen == {0, 1, 2}
    return record(7, ok, f"{len(RAC_TABLE)} fixtures, problems: {'; '.join(problems) or 'none'}")


_PRESERVED = {
    "fill": (is_non_homotopic, is_quasiplanar),
    "fill_simple": (is_simple, is_quasiplanar),
    "eliminate_t_cells": (is_non_homotopic, is_quasiplanar, is_filled),
}


def criterion_8():
    problems = []
    counts = Counter()
    for label, op, before, after, again in surgery_runs():
        counts[op] += 1
        if op == "fill" and not is_filled(after):
            problems.append(f"{op}[{label}] not filled")
        if op == "fill_simple" and not (is_simple(after) and is_filled(after)):
            problems.append(f"{op}[{label}] not simple and filled")
        if op == "eliminate_t_cells" and after.stats.count(CellKind.T6):
            problems.append(f"{op}[{label}] T6 left")
        for pred in _PRESERVED[op]:
            if not pred(after):
                problems.append(f"{op}[{label}] lost {pred.__name__}")
        if not pairs(before) <= pairs(after):
            problems.append(f"{op}[{label}] lost an edge")
        if again != after:
            problems.append(f"{op}[{label}] not idempotent")
    summary = ", ".join(f"{k}:{v}" for k, v in sorted(counts.items()))
    return record(8, not problems, f"runs {summary}; problems: {len(problems)}")


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}


def status_line(number):
    ok, detail = RESULTS[number]
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok = CRITERIA[number]()
    assert ok, status_line(number)


def main():
    for number in sorted(CRITERIA):
        CRITERIA[number]()
        print(status_line(number), flush=True)
    return 0 if all(ok for ok, _ in RESULTS.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
