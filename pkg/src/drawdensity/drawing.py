"""Combinatorial drawings on the sphere or plane.

A drawing is stored as its planarization: every edge is a path
``(source, x_1, ..., x_m, target)`` through its crossings, and every node
(vertex or crossing) carries a counterclockwise rotation of *rays*.  A ray
``(edge, dir)`` leaves the node along ``edge``; ``dir = +1`` points towards
the edge's target and ``dir = -1`` towards its source.  An edge visits a node
at most once, so rays and darts stay well defined under path surgery.

A dart ``(edge, node, dir)`` is a directed edge-segment leaving ``node``.
Cells are traced with the cell on the left of every dart.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadRotation,
    DanglingCrossing,
    DisconnectedPlanarization,
    DrawingError,
    LoopEdge,
    NonAlternatingCrossing,
    NotSphere,
    PreconditionFailed,
    SelfCrossingEdge,
    UnknownVertex,
)

SPHERE = "sphere"
PLANE = "plane"

Ray = tuple  # (edge id, +1 | -1)
Dart = tuple  # (edge id, tail node, +1 | -1)


class CellKind(Enum):
    TRI3 = "TRI3"
    A4 = "A4"
    Q4 = "Q4"
    D5 = "D5"
    W5 = "W5"
    P5 = "P5"
    T6 = "T6"
    OTHER = "OTHER"


# (vertex-incidences, segment-incidences, crossing-incidences) -> kind
_PATTERNS = {
    (0, 3, 3): CellKind.TRI3,
    (1, 3, 2): CellKind.A4,
    (0, 4, 4): CellKind.Q4,
    (2, 3, 1): CellKind.D5,
    (1, 4, 3): CellKind.W5,
    (0, 5, 5): CellKind.P5,
}


def classify(n_vertex: int, n_segment: int, n_crossing: int, distinct_vertices: int) -> CellKind:
    """Tag a boundary walk by its incidence counts."""
    kind = _PATTERNS.get((n_vertex, n_segment, n_crossing))
    if kind is not None:
        return kind
    if (n_vertex, n_segment, n_crossing) == (3, 3, 0) and distinct_vertices == 3:
        return CellKind.T6
    return CellKind.OTHER


@dataclass(frozen=True)
class Cell:
    id: int
    darts: tuple
    incidences: tuple  # ("v"|"x", node) and ("s", (edge, segment index)) alternating
    size: int
    vertex_incidences: int
    segment_incidences: int
    crossing_incidences: int
    vertices: frozenset
    kind: CellKind
    degenerate: bool
    unbounded: bool = False

    @property
    def distinct_vertices(self) -> int:
        return len(self.vertices)

    def __repr__(self):
        tag = self.kind.value if self.kind is not CellKind.OTHER else f"OTHER({self.size})"
        return f"Cell({self.id}, {tag}, size={self.size})"


@dataclass(frozen=True)
class Segment:
    edge: str
    index: int
    tail: str
    head: str


@dataclass(frozen=True)
class Planarization:
    nodes: tuple
    segments: tuple
    rotation: Mapping  # node -> tuple of (edge, segment index)


@dataclass(frozen=True)
class DrawingStats:
    n_vertices: int
    n_edges: int
    n_crossed_edges: int
    n_planar_edges: int
    n_crossings: int
    n_segments: int
    n_inner_segments: int
    n_cells: int
    kind_counts: Mapping = field(default_factory=dict)
    size_histogram: Mapping = field(default_factory=dict)
    degrees: Mapping = field(default_factory=dict)

    def count(self, kind: CellKind) -> int:
        return self.kind_counts.get(kind, 0)


def face_walks(paths: Mapping, rotation: Mapping) -> list:
    """Decompose all darts into left-hand boundary walks."""
    pos = {(e, n): i for e, p in paths.items() for i, n in enumerate(p)}
    prev_ray = {}
    for node, rot in rotation.items():
        for i, ray in enumerate(rot):
            prev_ray[(node, ray)] = rot[i - 1]

    def step(dart):
        e, n, s = dart
        m = paths[e][pos[(e, n)] + s]
        pe, ps = prev_ray[(m, (e, -s))]
        return (pe, m, ps)

    seen = set()
    walks = []
    for e, p in paths.items():
        for i in range(len(p) - 1):
            for start in ((e, p[i], 1), (e, p[i + 1], -1)):
                if start in seen:
                    continue
                walk = []
                d = start
                while d not in seen:
                    seen.add(d)
                    walk.append(d)
                    d = step(d)
                walks.append(walk)
    return walks


class Drawing:
    """Immutable combinatorial drawing; validated on construction unless ``check=False``."""

    def __init__(
        self,
        surface: str,
        vertices: Iterable[str],
        paths: Mapping[str, Sequence[str]],
        rotation: Mapping[str, Sequence[Ray]],
        outer_dart: Dart | None = None,
        check: bool = True,
    ):
        self.surface = surface
        self.vertices = tuple(vertices)
        self.paths = {e: tuple(p) for e, p in paths.items()}
        self.rotation = {n: _normalize_cycle(tuple(tuple(r) for r in rot)) for n, rot in rotation.items()}
        self.outer_dart = tuple(outer_dart) if outer_dart is not None else None
        self._vset = frozenset(self.vertices)
        crossings = {}
        for e, p in self.paths.items():
            for i, x in enumerate(p[1:-1]):
                crossings.setdefault(x, []).append((e, i))
        self.crossings = {x: tuple(v) for x, v in crossings.items()}
        if check:
            self._validate()

    # -- basic accessors -------------------------------------------------
    def is_vertex(self, node) -> bool:
        return node in self._vset

    @property
    def edges(self) -> tuple:
        return tuple(self.paths)

    def source(self, e):
        return self.paths[e][0]

    def target(self, e):
        return self.paths[e][-1]

    def endpoints(self, e):
        p = self.paths[e]
        return p[0], p[-1]

    def crossing_list(self, e) -> tuple:
        return self.paths[e][1:-1]

    def crossing_edges(self, x) -> tuple:
        (e, _), (f, _) = self.crossings[x]
        return e, f

    @cached_property
    def incident_edges(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e, p in self.paths.items():
            inc[p[0]].append(e)
            inc[p[-1]].append(e)
        return inc

    def degree(self, v) -> int:
        return len(self.incident_edges[v])

    def other_end(self, e, v):
        a, b = self.endpoints(e)
        return b if a == v else a

    @cached_property
    def _pos(self) -> dict:
        return {(e, n): i for e, p in self.paths.items() for i, n in enumerate(p)}

    def segment_of(self, dart) -> tuple:
        e, n, s = dart
        i = self._pos[(e, n)]
        return (e, i if s == 1 else i - 1)

    def head(self, dart):
        e, n, s = dart
        return self.paths[e][self._pos[(e, n)] + s]

    def twin(self, dart) -> Dart:
        e, n, s = dart
        return (e, self.head(dart), -s)

    # -- validation ------------------------------------------------------
    def _validate(self):
        if self.surface not in (SPHERE, PLANE):
            raise DrawingError(f"unknown surface {self.surface!r}")
        if len(self._vset) != len(self.vertices):
            raise DrawingError("duplicate vertex id")
        for e, p in self.paths.items():
            if len(p) < 2:
                raise DrawingError(f"edge {e} has no endpoints")
            if p[0] not in self._vset or p[-1] not in self._vset:
                raise UnknownVertex(f"edge {e} ends at an unknown vertex")
            if p[0] == p[-1]:
                raise LoopEdge(f"edge {e} is a loop at {p[0]}")
            inner = p[1:-1]
            if any(x in self._vset for x in inner):
                raise DanglingCrossing(f"edge {e} lists a vertex as a crossing")
            if len(set(inner)) != len(inner):
                raise SelfCrossingEdge(f"edge {e} crosses itself")
        for x, occ in self.crossings.items():
            if len(occ) != 2:
                raise DanglingCrossing(f"crossing {x} appears on {len(occ)} edge(s), expected 2")
            if occ[0][0] == occ[1][0]:
                raise SelfCrossingEdge(f"crossing {x} lies twice on edge {occ[0][0]}")

        for v in self.vertices:
            want = Counter()
            for e in self.incident_edges[v]:
                want[(e, 1 if self.source(e) == v else -1)] += 1
            got = Counter(self.rotation.get(v, ()))
            if got != want:
                raise BadRotation(f"rotation at vertex {v} does not list exactly its edge-ends")
        for x, ((e, _), (f, _)) in self.crossings.items():
            rot = self.rotation.get(x, ())
            want = {(e, 1), (e, -1), (f, 1), (f, -1)}
            if len(rot) != 4 or set(rot) != want:
                raise BadRotation(f"rotation at crossing {x} must list the four segment-ends")
            if rot[0][0] != rot[2][0] or rot[1][0] != rot[3][0]:
                raise NonAlternatingCrossing(f"crossing {x} is not a proper crossing")
        extra = set(self.rotation) - self._vset - set(self.crossings)
        if extra:
            raise DanglingCrossing(f"rotation given for unknown node(s) {sorted(extra)}")

        if not self.is_connected():
            raise DisconnectedPlanarization("planarization is disconnected")
        nodes = len(self.vertices) + len(self.crossings)
        faces = max(1, len(self._walks))
        if nodes - self.n_segments + faces != 2:
            raise NotSphere(
                f"Euler relation fails: {nodes} - {self.n_segments} + {faces} != 2"
            )
        if self.surface == PLANE:
            if self.outer_dart is None:
                raise DrawingError("plane drawing needs an outer dart")
            e, n, s = self.outer_dart
            if (e, n) not in self._pos or not 0 <= self._pos[(e, n)] + s < len(self.paths[e]):
                raise DrawingError(f"outer dart {self.outer_dart} is not a dart of the drawing")

    def is_connected(self) -> bool:
        nodes = list(self._vset) + list(self.crossings)
        if not nodes:
            return True
        adj = {n: set() for n in nodes}
        for p in self.paths.values():
            for a, b in zip(p, p[1:]):
                adj[a].add(b)
                adj[b].add(a)
        seen = {nodes[0]}
        queue = deque([nodes[0]])
        while queue:
            for m in adj[queue.popleft()]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        return len(seen) == len(nodes)

    # -- derived structure ------------------------------------------------
    @property
    def n_segments(self) -> int:
        return sum(len(p) - 1 for p in self.paths.values())

    @cached_property
    def _walks(self) -> list:
        return face_walks(self.paths, self.rotation)

    @cached_property
    def cells(self) -> tuple:
        outer = None
        if self.surface == PLANE and self.outer_dart is not None:
            outer = self.outer_dart
        cells = []
        for cid, walk in enumerate(self._walks):
            cells.append(self._make_cell(cid, walk, outer is not None and outer in walk))
        if not cells and len(self.vertices) == 1:
            v = self.vertices[0]
            cells.append(
                Cell(0, (), (("v", v),), 1, 1, 0, 0, frozenset([v]), CellKind.OTHER, False, True)
            )
        return tuple(cells)

    def _make_cell(self, cid, walk, unbounded=False) -> Cell:
        inc = []
        nv = nx = 0
        verts = []
        for dart in walk:
            node = dart[1]
            if node in self._vset:
                inc.append(("v", node))
                nv += 1
                verts.append(node)
            else:
                inc.append(("x", node))
                nx += 1
            inc.append(("s", self.segment_of(dart)))
        ns = len(walk)
        nodes = [d[1] for d in walk]
        vset = frozenset(verts)
        return Cell(
            id=cid,
            darts=tuple(walk),
            incidences=tuple(inc),
            size=nv + ns,
            vertex_incidences=nv,
            segment_incidences=ns,
            crossing_incidences=nx,
            vertices=vset,
            kind=classify(nv, ns, nx, len(vset)),
            degenerate=len(set(nodes)) != len(nodes),
            unbounded=unbounded,
        )

    @cached_property
    def dart_cell(self) -> dict:
        return {d: c.id for c in self.cells for d in c.darts}

    @cached_property
    def stats(self) -> DrawingStats:
        crossed = sum(1 for p in self.paths.values() if len(p) > 2)
        n_x = len(self.crossings)
        kinds = Counter(c.kind for c in self.cells)
        sizes = Counter(c.size for c in self.cells)
        return DrawingStats(
            n_vertices=len(self.vertices),
            n_edges=len(self.paths),
            n_crossed_edges=crossed,
            n_planar_edges=len(self.paths) - crossed,
            n_crossings=n_x,
            n_segments=self.n_segments,
            n_inner_segments=sum(max(0, len(p) - 3) for p in self.paths.values()),
            n_cells=len(self.cells),
            kind_counts=dict(kinds),
            size_histogram=dict(sorted(sizes.items())),
            degrees={v: self.degree(v) for v in self.vertices},
        )

    def cells_at(self, v) -> list:
        """Distinct cells incident to vertex ``v``."""
        return [c for c in self.cells if v in c.vertices]

    # -- equality / copying --------------------------------------------------
    def _key(self):
        return (
            self.surface,
            frozenset(self.vertices),
            tuple(sorted(self.paths.items())),
            tuple(sorted(self.rotation.items())),
            self.outer_dart if self.surface == PLANE else None,
        )

    def __eq__(self, other):
        return isinstance(other, Drawing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"Drawing({self.surface}, |V|={len(self.vertices)}, |E|={len(self.paths)}, "
            f"|X|={len(self.crossings)})"
        )

    def replace(self, **changes) -> "Drawing":
        args = dict(
            surface=self.surface,
            vertices=self.vertices,
            paths=self.paths,
            rotation=self.rotation,
            outer_dart=self.outer_dart,
        )
        args.update(changes)
        return Drawing(**args)


def _normalize_cycle(rot: tuple) -> tuple:
    if not rot:
        return rot
    i = min(range(len(rot)), key=lambda k: (str(rot[k][0]), rot[k][1]))
    return rot[i:] + rot[:i]


# -- construction from the edge/crossing-list description ---------------------------


def build_drawing(
    surface: str,
    vertices: Iterable[str],
    edges: Iterable[tuple],
    vertex_rotations: Mapping | None = None,
    crossing_rotations: Mapping | None = None,
    outer_dart: tuple | None = None,
    declared_crossings: Mapping | None = None,
) -> Drawing:
    """Build and validate a drawing from the textual description.

    ``edges`` holds ``(edge id, source, target, [crossing ids])`` with crossings
    ordered from the source.  Vertex rotations list edge-ends ``(e, "s"|"t")``;
    crossing rotations list segment-ends ``(e, segment index)``; the outer dart is
    ``(e, segment index, +1|-1)``.  Rotations of vertices with degree at most two
    may be omitted, since they are unique.
    """
    vertices = list(vertices)
    vset = set(vertices)
    paths = {}
    for e, u, v, xs in edges:
        if e in paths:
            raise DrawingError(f"duplicate edge id {e}")
        if u not in vset or v not in vset:
            raise UnknownVertex(f"edge {e} ends at an unknown vertex")
        if u == v:
            raise LoopEdge(f"edge {e} is a loop at {u}")
        paths[e] = (u, *xs, v)

    on_edges = {}
    for e, p in paths.items():
        for x in p[1:-1]:
            on_edges.setdefault(x, []).append(e)
    if declared_crossings is not None:
        for x, pair in declared_crossings.items():
            if sorted(on_edges.get(x, [])) != sorted(pair):
                raise DanglingCrossing(f"crossing {x} declared on {pair} but listed on {on_edges.get(x, [])}")
        for x in on_edges:
            if x not in declared_crossings:
                raise DanglingCrossing(f"crossing {x} is not declared")
    for x, es in on_edges.items():
        if len(es) == 2 and es[0] == es[1]:
            raise SelfCrossingEdge(f"edge {es[0]} crosses itself at {x}")
        if len(es) != 2:
            raise DanglingCrossing(f"crossing {x} appears on {len(es)} edge(s), expected 2")

    rotation = {}
    vertex_rotations = dict(vertex_rotations or {})
    for v in vertices:
        if v in vertex_rotations:
            rays = []
            for e, end in vertex_rotations[v]:
                if e not in paths:
                    raise BadRotation(f"rotation at {v} names unknown edge {e}")
                node = paths[e][0] if end == "s" else paths[e][-1]
                if end not in ("s", "t") or node != v:
                    raise BadRotation(f"rotation at {v}: {e}@{end} is not an end at {v}")
                rays.append((e, 1 if end == "s" else -1))
            rotation[v] = rays
        else:
            rays = [(e, 1) for e, p in paths.items() if p[0] == v]
            rays += [(e, -1) for e, p in paths.items() if p[-1] == v]
            if len(rays) > 2:
                raise BadRotation(f"missing rotation at vertex {v}")
            rotation[v] = rays
    for x, entries in (crossing_rotations or {}).items():
        if x not in on_edges:
            raise DanglingCrossing(f"rotation for unknown crossing {x}")
        rays = []
        for e, idx in entries:
            if e not in paths:
                raise BadRotation(f"rotation at {x} names unknown edge {e}")
            p = paths[e]
            if 0 <= idx < len(p) - 1 and p[idx + 1] == x:
                rays.append((e, -1))
            elif 0 < idx < len(p) and p[idx] == x:
                rays.append((e, 1))
            else:
                raise BadRotation(f"rotation at {x}: {e}@{idx} is not a segment-end at {x}")
        rotation[x] = rays
    for x in on_edges:
        if x not in rotation:
            raise BadRotation(f"missing rotation at crossing {x}")

    dart = None
    if outer_dart is not None:
        e, idx, s = outer_dart
        if e not in paths or not 0 <= idx < len(paths[e]) - 1:
            raise DrawingError(f"outer dart names an unknown segment {e}@{idx}")
        dart = (e, paths[e][idx], 1) if s > 0 else (e, paths[e][idx + 1], -1)
    return Drawing(surface, vertices, paths, rotation, dart)


def planarize(d: Drawing) -> Planarization:
    segments = []
    for e, p in d.paths.items():
        for i, (a, b) in enumerate(zip(p, p[1:])):
            segments.append(Segment(e, i, a, b))
    rotation = {}
    for node, rot in d.rotation.items():
        rotation[node] = tuple(d.segment_of((e, node, s)) for e, s in rot)
    return Planarization(tuple(d.vertices) + tuple(d.crossings), tuple(segments), rotation)


def enumerate_cells(d: Drawing) -> tuple:
    """Return ``(cells, stats)``."""
    return d.cells, d.stats


# -- link of a vertex -----------------------------------------------------------------


@dataclass(frozen=True)
class LinkResult:
    drawing: Drawing  # residual drawing, unvalidated (it may be disconnected)
    c0_size: int
    c0_walks: tuple
    cells_at_v: tuple
    predicted: int

    @property
    def holds(self) -> bool:
        return self.c0_size == self.predicted


def link_of_vertex(d: Drawing, v: str, check: bool = True) -> LinkResult:
    """Remove ``v`` after subdividing its crossed edges just past their first crossing.

    Returns the residual drawing, the size of the cell ``v`` leaves behind (measured
    on the residual), and the value predicted from the cells around ``v``.
    """
    if check:
        from .properties import is_non_homotopic

        failed = []
        if len(d.vertices) < 3:
            failed.append("at least 3 vertices")
        if not d.is_connected():
            failed.append("connected")
        if not is_non_homotopic(d):
            failed.append("non-homotopic")
        if failed:
            raise PreconditionFailed(f"link_of_vertex needs: {', '.join(failed)}", failed)
    if v not in d._vset:
        raise UnknownVertex(f"no vertex {v}")

    at_v = tuple(d.cells_at(v))
    predicted = sum(c.size - 5 for c in at_v) + len(at_v)

    paths = dict(d.paths)
    rotation = {n: list(r) for n, r in d.rotation.items()}
    vertices = [u for u in d.vertices if u != v]
    dropped = set()
    taken = set(d.vertices) | set(d.crossings)
    for e in d.incident_edges[v]:
        p = paths[e]
        from_v = p if p[0] == v else p[::-1]
        if len(from_v) == 2:
            far_end = from_v[1]
            rotation[far_end].remove((e, -1 if p[0] == v else 1))
            del paths[e]
            continue
        dropped.add(from_v[1])
        w = _fresh(f"{v}~{e}", taken)
        taken.add(w)
        vertices.append(w)
        far = (w,) + tuple(from_v[2:])
        paths[e] = far if p[0] == v else far[::-1]
        rotation[w] = [(e, 1 if p[0] == v else -1)]
    del rotation[v]
    for x in dropped:
        rotation.pop(x, None)
        for e in list(paths):
            if x in paths[e]:
                paths[e] = tuple(n for n in paths[e] if n != x)

    residual = Drawing(d.surface, vertices, paths, rotation, None, check=False)
    seeds = set()
    for c in at_v:
        for e, n, s in c.darts:
            if e in paths and (e, n) in residual._pos:
                seeds.add((e, n, s))
    walks = tuple(w for w in residual._walks if any(dd in seeds for dd in w))
    size = 0
    for w in walks:
        size += len(w) + sum(1 for dd in w if dd[1] in residual._vset)
    isolated = [u for u in vertices if not residual.incident_edges[u]]
    size += len(isolated)
    return LinkResult(residual, size, walks, at_v, predicted)


def _fresh(base, taken) -> str:
    name = base
    k = 1
    while name in taken:
        name = f"{base}#{k}"
        k += 1
    return name


def link_is_regular(d: Drawing, v: str) -> bool:
    """True when the cells around ``v`` glue into the link along ``v``'s own segments only.

    That needs ``deg(v)`` distinct cells at ``v`` and, for every crossed edge at
    ``v``, neither cell beside the segment just past its first crossing may touch ``v``.
    Only then does the link size equal the count predicted from the cells at ``v``.
    """
    around = {c.id for c in d.cells_at(v)}
    if len(around) != d.degree(v):
        return False
    for e in set(d.incident_edges[v]):
        p = d.paths[e]
        if len(p) < 3:
            continue
        starts = []
        if p[0] == v:
            starts.append((e, p[1], 1))
        if p[-1] == v:
            starts.append((e, p[-2], -1))
        for dart in starts:
            if d.dart_cell[dart] in around or d.dart_cell[d.twin(dart)] in around:
                return False
    return True
