"""Structural properties of drawings: simplicity, lenses, filledness, bipartiteness."""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations

from .drawing import PLANE, Drawing
from .errors import NotBipartite


@dataclass(frozen=True)
class Verdict:
    """Boolean result with an optional witness; truthy iff ``ok``."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def common_points(d: Drawing) -> dict:
    """Map each edge pair (sorted) to its shared endpoints plus mutual crossings."""
    pts = defaultdict(list)
    for x, ((e, _), (f, _)) in d.crossings.items():
        pts[tuple(sorted((e, f)))].append(x)
    for v in d.vertices:
        inc = sorted(set(d.incident_edges[v]))
        for e, f in combinations(inc, 2):
            pts[(e, f)].append(v)
    return pts


def is_simple(d: Drawing) -> Verdict:
    """Any two edges share at most one point (endpoint or crossing)."""
    for pair, pts in sorted(common_points(d).items()):
        if len(pts) >= 2:
            return Verdict(False, (pair, tuple(pts)))
    return Verdict(True)


@dataclass(frozen=True)
class Lens:
    edges: tuple
    ends: tuple  # the two delimiting points p, q
    arc_e: tuple  # segment indices of edges[0] on the boundary
    arc_f: tuple
    left_witness: object  # a node strictly inside, or None when that side is empty
    right_witness: object
    bounded_side: str | None = None  # "left" / "right" for plane drawings

    @property
    def witness(self):
        """Interior witness, None when the lens counts as empty."""
        if self.bounded_side == "left":
            return self.left_witness
        if self.bounded_side == "right":
            return self.right_witness
        if self.left_witness is None or self.right_witness is None:
            return None
        return self.left_witness

    @property
    def empty(self) -> bool:
        return self.witness is None


def _arc_darts(d: Drawing, e, p, q):
    path = d.paths[e]
    i, j = path.index(p), path.index(q)
    s = 1 if j > i else -1
    return [(e, path[k], s) for k in range(i, j, s)]


def lenses(d: Drawing) -> list:
    """Every lens of the drawing with interior witnesses on both sides."""
    found = []
    for (e, f), pts in sorted(common_points(d).items()):
        if len(pts) < 2:
            continue
        pe, pf = d.paths[e], d.paths[f]
        along_e = sorted(pts, key=pe.index)
        rank_f = {p: r for r, p in enumerate(sorted(pts, key=pf.index))}
        for p, q in zip(along_e, along_e[1:]):
            if abs(rank_f[p] - rank_f[q]) != 1:
                continue
            found.append(_make_lens(d, e, f, p, q))
    return found


def _make_lens(d: Drawing, e, f, p, q) -> Lens:
    curve = _arc_darts(d, e, p, q) + _arc_darts(d, f, q, p)
    on_curve = {d.segment_of(x) for x in curve}
    curve_nodes = {x[1] for x in curve}
    cell_of = d.dart_cell
    cells = d.cells

    def side(seeds):
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            c = cells[queue.popleft()]
            for dart in c.darts:
                if d.segment_of(dart) in on_curve:
                    continue
                nb = cell_of[d.twin(dart)]
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        return seen

    left = side({cell_of[x] for x in curve})
    right = side({cell_of[d.twin(x)] for x in curve})

    def witness(region):
        for cid in sorted(region):
            for dart in cells[cid].darts:
                if dart[1] not in curve_nodes:
                    return dart[1]
        return None

    bounded = None
    if d.surface == PLANE and d.outer_dart is not None:
        outer = cell_of[d.outer_dart]
        bounded = "right" if outer in left else "left"
    arc_e = tuple(sorted(d.segment_of(x)[1] for x in curve if x[0] == e))
    arc_f = tuple(sorted(d.segment_of(x)[1] for x in curve if x[0] == f))
    return Lens((e, f), (p, q), arc_e, arc_f, witness(left), witness(right), bounded)


def find_empty_lenses(d: Drawing) -> list:
    return [lens for lens in lenses(d) if lens.empty]


def is_non_homotopic(d: Drawing) -> Verdict:
    empty = find_empty_lenses(d)
    return Verdict(not empty, empty[0] if empty else None)


def _has_uncrossed_edge_on(d: Drawing, cell, u, v) -> bool:
    for e, _, _ in cell.darts:
        p = d.paths[e]
        if len(p) == 2 and {p[0], p[1]} == {u, v}:
            return True
    return False


def unfilled_pairs(d: Drawing):
    """Yield ``(cell, u, v)`` for co-incident vertex pairs lacking an uncrossed edge on the cell."""
    for c in d.cells:
        for u, v in combinations(sorted(c.vertices), 2):
            if not _has_uncrossed_edge_on(d, c, u, v):
                yield c, u, v


def is_filled(d: Drawing) -> Verdict:
    for c, u, v in unfilled_pairs(d):
        return Verdict(False, (c.id, u, v))
    return Verdict(True)


def max_distinct_vertices_per_cell(d: Drawing) -> int:
    return max((len(c.vertices) for c in d.cells), default=0)


@dataclass(frozen=True)
class Bipartition:
    white: frozenset
    black: frozenset

    def color(self, v) -> str:
        return "W" if v in self.white else "B"


def bipartition(d: Drawing) -> Bipartition:
    """Proper 2-colouring of the underlying graph; raises NotBipartite with an odd closed walk."""
    adj = defaultdict(list)
    for e, p in d.paths.items():
        adj[p[0]].append(p[-1])
        adj[p[-1]].append(p[0])
    color = {}
    parent = {}
    for root in d.vertices:
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in color:
                    color[b] = 1 - color[a]
                    parent[b] = a
                    queue.append(b)
                elif color[b] == color[a]:
                    raise NotBipartite(_odd_walk(parent, a, b))
    white = frozenset(v for v, c in color.items() if c == 0)
    return Bipartition(white, frozenset(color) - white)


def _odd_walk(parent, a, b):
    def up(v):
        out = []
        while v is not None:
            out.append(v)
            v = parent[v]
        return out

    pa, pb = up(a), up(b)
    common = set(pa) & set(pb)
    top_a = next(i for i, v in enumerate(pa) if v in common)
    top_b = pb.index(pa[top_a])
    return pa[: top_a + 1] + pb[:top_b][::-1] + [a]
