"""Predicates for beyond-planar drawing classes."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass
from itertools import combinations

from .drawing import CellKind, Drawing
from .errors import NotBipartite
from .properties import Verdict, bipartition, is_filled, is_non_homotopic, is_simple


def crossing_graph(d: Drawing) -> dict:
    """Edges adjacent iff they cross at least once."""
    adj = defaultdict(set)
    for x in d.crossings:
        e, f = d.crossing_edges(x)
        adj[e].add(f)
        adj[f].add(e)
    return adj


def is_quasiplanar(d: Drawing) -> Verdict:
    adj = crossing_graph(d)
    for e in sorted(adj):
        for f, g in combinations(sorted(adj[e]), 2):
            if e < f and e < g and g in adj[f]:
                return Verdict(False, (e, f, g))
    return Verdict(True)


def _is_star(d: Drawing, edges) -> bool:
    edges = list(edges)
    if len(edges) <= 1:
        return True
    common = set(d.endpoints(edges[0]))
    for e in edges[1:]:
        common &= set(d.endpoints(e))
    return bool(common)


def is_fan_crossing(d: Drawing) -> Verdict:
    adj = crossing_graph(d)
    for e in d.paths:
        if not _is_star(d, adj.get(e, ())):
            return Verdict(False, e)
    return Verdict(True)


def crossings_per_edge(d: Drawing) -> dict:
    return {e: len(p) - 2 for e, p in d.paths.items()}


def is_k_planar(d: Drawing, k: int) -> Verdict:
    if k < 0:
        raise ValueError("k must be non-negative")
    for e, c in crossings_per_edge(d).items():
        if c > k:
            return Verdict(False, e)
    return Verdict(True)


def real_face_level(d: Drawing) -> int:
    """Minimum number of vertex-incidences over all cells."""
    return min(c.vertex_incidences for c in d.cells)


def is_k_plus_real_face(d: Drawing, k: int) -> Verdict:
    if k < 1:
        raise ValueError("k must be at least 1")
    for c in d.cells:
        if c.vertex_incidences < k:
            return Verdict(False, c.id)
    return Verdict(True)


@dataclass(frozen=True)
class ClassReport:
    simple: bool
    non_homotopic: bool
    filled: bool
    bipartite: bool
    quasiplanar: bool
    fan_crossing: bool
    k_planar: int  # smallest k for which the drawing is k-planar
    real_face_level: int
    connected: bool
    t_cells: int
    max_distinct_vertices_per_cell: int

    def as_dict(self) -> dict:
        return asdict(self)


def class_report(d: Drawing) -> ClassReport:
    try:
        bipartition(d)
        bip = True
    except NotBipartite:
        bip = False
    return ClassReport(
        simple=bool(is_simple(d)),
        non_homotopic=bool(is_non_homotopic(d)),
        filled=bool(is_filled(d)),
        bipartite=bip,
        quasiplanar=bool(is_quasiplanar(d)),
        fan_crossing=bool(is_fan_crossing(d)),
        k_planar=max(crossings_per_edge(d).values(), default=0),
        real_face_level=real_face_level(d),
        connected=d.is_connected(),
        t_cells=d.stats.count(CellKind.T6),
        max_distinct_vertices_per_cell=max((len(c.vertices) for c in d.cells), default=0),
    )
