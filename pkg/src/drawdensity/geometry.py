"""Polyline drawings with exact rational coordinates.

Every predicate is a sign of an exact Fraction expression; degenerate contacts are
rejected rather than perturbed.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations

from .drawing import PLANE, Drawing
from .errors import (
    DegenerateContact,
    DisconnectedPlanarization,
    DrawingError,
    GenerationFailed,
    UnboundedCell,
)


def _pt(p):
    x, y = p
    if isinstance(x, float) or isinstance(y, float):
        raise TypeError("coordinates must be exact (int, Fraction or 'p/q' strings), not float")
    return (Fraction(x), Fraction(y))


def orient(a, b, c) -> int:
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    if all(q.denominator == 1 for q in (*a, *b, *c)):
        # integer points: skip Fraction arithmetic
        (ax, ay), (bx, by), (cx, cy) = ((p[0].numerator, p[1].numerator) for p in (a, b, c))
        v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        return (v > 0) - (v < 0)
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _on_closed_segment(p, a, b) -> bool:
    return (
        orient(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _half(v):
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def ccw_compare(u, v) -> int:
    """Order directions counterclockwise starting at the positive x-axis."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = _cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def sort_ccw(items, direction):
    return sorted(items, key=cmp_to_key(lambda a, b: ccw_compare(direction(a), direction(b))))


class GeomDrawing:
    """Vertices at exact points; each edge a polyline from one vertex to another."""

    def __init__(self, vertices, edges, ends=None):
        self.vertices = {v: _pt(p) for v, p in vertices.items()}
        self.edges = {}
        self.ends = {}
        for e, pts in edges.items():
            pts = tuple(_pt(p) for p in pts)
            self.edges[e] = pts
            if ends and e in ends:
                self.ends[e] = tuple(ends[e])
            else:
                self.ends[e] = (self._vertex_at(pts[0], e), self._vertex_at(pts[-1], e))

    def _vertex_at(self, p, e):
        for v, q in self.vertices.items():
            if q == p:
                return v
        raise DrawingError(f"edge {e} does not end at a vertex point")

    @classmethod
    def from_edges(cls, vertices, edges):
        """``edges``: ``{id: (u, v, [bend points])}``."""
        verts = {v: _pt(p) for v, p in vertices.items()}
        polys, ends = {}, {}
        for e, (u, v, bends) in edges.items():
            if u not in verts or v not in verts:
                from .errors import UnknownVertex

                raise UnknownVertex(f"edge {e} ends at an unknown vertex")
            polys[e] = (verts[u], *bends, verts[v])
            ends[e] = (u, v)
        return cls(verts, polys, ends)

    def bends(self, e) -> int:
        return len(self.edges[e]) - 2

    def __eq__(self, other):
        return (
            isinstance(other, GeomDrawing)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.ends == other.ends
        )

    def __repr__(self):
        return f"GeomDrawing(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    @cached_property
    def arrangement(self):
        return compute_arrangement(self)

    @cached_property
    def conversion(self):
        return _convert(self)


# -- arrangement ---------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingEvent:
    id: str
    edges: tuple  # (e, f)
    point: tuple
    pieces: tuple  # piece index on e, piece index on f
    params: tuple  # position within each piece, in [0, 1]


def _pieces(pts):
    return list(zip(pts, pts[1:]))


def _validate_polylines(g: GeomDrawing):
    pts = list(g.vertices.values())
    if len(set(pts)) != len(pts):
        raise DegenerateContact("two vertices share a point")
    vpoints = set(pts)
    for e, poly in g.edges.items():
        u, v = g.ends[e]
        if u == v:
            from .errors import LoopEdge

            raise LoopEdge(f"edge {e} is a loop")
        if poly[0] != g.vertices[u] or poly[-1] != g.vertices[v]:
            raise DrawingError(f"edge {e} does not end at its vertices")
        for a, b in zip(poly, poly[1:]):
            if a == b:
                raise DegenerateContact(f"edge {e} has a zero-length piece")
        for b in poly[1:-1]:
            if b in vpoints:
                raise DegenerateContact(f"edge {e} bends at a vertex point")
        pieces = _pieces(poly)
        for i, j in combinations(range(len(pieces)), 2):
            (a, b), (c, d) = pieces[i], pieces[j]
            if j == i + 1:
                # consecutive pieces share b == c; they must not fold back
                if orient(a, b, d) == 0 and (
                    _on_closed_segment(d, a, b) or _on_closed_segment(a, c, d)
                ):
                    raise DegenerateContact(f"edge {e} folds back on itself")
            elif _segments_meet(a, b, c, d):
                raise DegenerateContact(f"edge {e} intersects itself")
        for w, p in g.vertices.items():
            for i, (a, b) in enumerate(pieces):
                if p in (a, b) and ((i == 0 and p == a) or (i == len(pieces) - 1 and p == b)):
                    continue
                if _on_closed_segment(p, a, b):
                    raise DegenerateContact(f"edge {e} passes through vertex {w}")


def _segments_meet(a, b, c, d) -> bool:
    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and _on_closed_segment(c, a, b))
        or (o2 == 0 and _on_closed_segment(d, a, b))
        or (o3 == 0 and _on_closed_segment(a, c, d))
        or (o4 == 0 and _on_closed_segment(b, c, d))
    )


def compute_arrangement(g: GeomDrawing) -> list:
    """All crossings between distinct edges, after rejecting degenerate contacts."""
    _validate_polylines(g)
    events = []
    names = list(g.edges)
    vpoints = set(g.vertices.values())
    for ei, fi in combinations(range(len(names)), 2):
        e, f = names[ei], names[fi]
        shared = set(g.ends[e]) & set(g.ends[f])
        shared_pts = {g.vertices[v] for v in shared}
        pe, pf = _pieces(g.edges[e]), _pieces(g.edges[f])
        for i, (a, b) in enumerate(pe):
            for j, (c, d) in enumerate(pf):
                o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
                if o1 * o2 < 0 and o3 * o4 < 0:
                    r = _sub(b, a)
                    s = _sub(d, c)
                    den = _cross(r, s)
                    t = _cross(_sub(c, a), s) / den
                    u = _cross(_sub(c, a), r) / den
                    p = (a[0] + t * r[0], a[1] + t * r[1])
                    events.append((e, f, p, i, j, t, u))
                    continue
                if not _segments_meet(a, b, c, d):
                    continue
                if o1 == o2 == 0:
                    # collinear pieces meeting: only a single shared endpoint is allowed
                    common = {a, b} & {c, d}
                    if len(common) == 1 and common <= shared_pts:
                        x = next(iter(common))
                        other_e = b if a == x else a
                        other_f = d if c == x else c
                        if not _on_closed_segment(other_f, x, other_e) and not _on_closed_segment(
                            other_e, x, other_f
                        ):
                            continue
                    raise DegenerateContact(f"edges {e} and {f} overlap")
                contact = _contact_point(a, b, c, d, o1, o2, o3, o4)
                if contact in shared_pts and contact in (a, b) and contact in (c, d):
                    continue
                if contact in vpoints:
                    raise DegenerateContact(f"edge passes through a vertex at {contact}")
                raise DegenerateContact(f"edges {e} and {f} touch or cross at a bend at {contact}")
    points = Counter(ev[2] for ev in events)
    for p, k in points.items():
        if k > 1:
            raise DegenerateContact(f"more than two edge pieces meet at {p}")
    out = []
    for k, (e, f, p, i, j, t, u) in enumerate(events):
        out.append(CrossingEvent(f"x{k + 1}", (e, f), p, (i, j), (t, u)))
    return out


def _contact_point(a, b, c, d, o1, o2, o3, o4):
    if o1 == 0 and _on_closed_segment(c, a, b):
        return c
    if o2 == 0 and _on_closed_segment(d, a, b):
        return d
    if o3 == 0 and _on_closed_segment(a, c, d):
        return a
    return b


# -- conversion to a combinatorial drawing ------------------------------------------------


@dataclass(frozen=True)
class Conversion:
    drawing: Drawing
    crossing_ids: dict  # arrangement id -> node id in the drawing
    segment_polylines: dict  # (edge, segment index) -> tuple of points, source to target
    node_points: dict


def _fresh_names(events, taken):
    names = {}
    k = 0
    for ev in events:
        while True:
            k += 1
            cand = f"x{k}"
            if cand not in taken:
                break
        names[ev.id] = cand
    return names


def _convert(g: GeomDrawing) -> Conversion:
    events = g.arrangement
    names = _fresh_names(events, set(g.vertices) | set(g.edges))
    along = defaultdict(list)  # edge -> [(piece, param, node, point)]
    for ev in events:
        x = names[ev.id]
        e, f = ev.edges
        along[e].append((ev.pieces[0], ev.params[0], x, ev.point))
        along[f].append((ev.pieces[1], ev.params[1], x, ev.point))
    for lst in along.values():
        lst.sort(key=lambda item: (item[0], item[1]))

    node_points = dict(g.vertices)
    paths = {}
    seg_poly = {}
    for e, poly in g.edges.items():
        u, v = g.ends[e]
        xs = along.get(e, [])
        paths[e] = (u, *(x for _, _, x, _ in xs), v)
        for _, _, x, p in xs:
            node_points[x] = p
        # cut the polyline at the crossings
        seg = [poly[0]]
        idx = 0
        cursor = 0
        for i in range(len(poly) - 1):
            while cursor < len(xs) and xs[cursor][0] == i:
                p = xs[cursor][3]
                seg.append(p)
                seg_poly[(e, idx)] = tuple(seg)
                idx += 1
                seg = [p]
                cursor += 1
            seg.append(poly[i + 1])
        seg_poly[(e, idx)] = tuple(seg)

    rotation = {}
    for v in g.vertices:
        rays = []
        for e, poly in g.edges.items():
            a, b = g.ends[e]
            if a == v:
                rays.append(((e, 1), _sub(poly[1], poly[0])))
            if b == v:
                rays.append(((e, -1), _sub(poly[-2], poly[-1])))
        rotation[v] = [r for r, _ in sort_ccw(rays, lambda item: item[1])]
    for ev in events:
        x = names[ev.id]
        rays = []
        for eid, piece in zip(ev.edges, ev.pieces):
            a, b = g.edges[eid][piece], g.edges[eid][piece + 1]
            rays.append(((eid, 1), _sub(b, a)))
            rays.append(((eid, -1), _sub(a, b)))
        rotation[x] = [r for r, _ in sort_ccw(rays, lambda item: item[1])]

    outer = _outer_dart(g, paths, rotation, seg_poly, node_points)
    d = Drawing(PLANE, list(g.vertices), paths, rotation, outer)
    return Conversion(d, names, seg_poly, node_points)


def _outer_dart(g, paths, rotation, seg_poly, node_points):
    if not g.edges:
        return None
    # lowest-leftmost point of the whole drawing; direction (-1, 0) from it is free
    candidates = []
    for (e, idx), poly in seg_poly.items():
        for k, p in enumerate(poly):
            candidates.append((p[0], p[1], e, idx, k, len(poly)))
    x, y, e, idx, k, length = min(candidates)
    left = (Fraction(-1), Fraction(0))
    if 0 < k < length - 1:
        poly = seg_poly[(e, idx)]
        p = poly[k]
        u_prev, u_next = _sub(poly[k - 1], p), _sub(poly[k + 1], p)
        path = paths[e]
        if _in_ccw_wedge(left, u_next, u_prev):
            return (e, path[idx], 1)
        return (e, path[idx + 1], -1)
    node = paths[e][idx] if k == 0 else paths[e][idx + 1]
    p = node_points[node]
    rot = rotation[node]
    dirs = []
    for eid, s in rot:
        path = paths[eid]
        i = path.index(node)
        sidx = i if s == 1 else i - 1
        poly = seg_poly[(eid, sidx)]
        q = poly[1] if s == 1 else poly[-2]
        dirs.append(_sub(q, p))
    for i, ray in enumerate(rot):
        if len(rot) == 1 or _in_ccw_wedge(left, dirs[i], dirs[(i + 1) % len(rot)]):
            return (ray[0], node, ray[1])
    raise AssertionError("no outer wedge found")


def _in_ccw_wedge(w, a, b) -> bool:
    """Is direction ``w`` strictly inside the counterclockwise sweep from ``a`` to ``b``?"""
    rw = _rel(w, a)
    if rw == (0, 0):
        return False
    rb = _rel(b, a)
    return rb == (0, 0) or rw < rb


def _rel(v, base):
    """Comparable ccw angle of ``v`` measured from ``base``: (turn class, tie-breaker)."""
    # quadrant classification relative to base, then cross product inside the class
    c = _cross(base, v)
    dot = base[0] * v[0] + base[1] * v[1]
    if c == 0 and dot > 0:
        return (0, 0)
    if c > 0:
        return (1, _ratio(-dot, c))
    if c == 0:
        return (2, 0)
    return (3, _ratio(dot, -c))


def _ratio(num, den):
    return Fraction(num) / Fraction(den)


def to_combinatorial(g: GeomDrawing) -> Drawing:
    return g.conversion.drawing


# -- RAC ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class RacReport:
    ok: bool
    k: int
    bends: dict
    dots: dict  # crossing id -> exact dot product of the two directions

    def __bool__(self):
        return self.ok


def is_rac(g: GeomDrawing, k: int) -> RacReport:
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    bends = {e: g.bends(e) for e in g.edges}
    dots = {}
    for ev in g.arrangement:
        (e, f), (i, j) = ev.edges, ev.pieces
        a, b = g.edges[e][i], g.edges[e][i + 1]
        c, d = g.edges[f][j], g.edges[f][j + 1]
        u, v = _sub(b, a), _sub(d, c)
        dots[ev.id] = u[0] * v[0] + u[1] * v[1]
    ok = all(b <= k for b in bends.values()) and all(x == 0 for x in dots.values())
    return RacReport(ok, k, bends, dots)


def cell_corners(g: GeomDrawing, cell):
    """Cyclic corner list ``(point, kind)`` along a cell, kind in {'vertex','crossing','bend'}."""
    conv = g.conversion
    d = conv.drawing
    corners = []
    for dart in cell.darts:
        e, node, s = dart
        seg = d.segment_of(dart)
        poly = conv.segment_polylines[seg]
        if s == -1:
            poly = poly[::-1]
        corners.append((poly[0], "vertex" if d.is_vertex(node) else "crossing"))
        corners.extend((p, "bend") for p in poly[1:-1])
    return corners


def convex_bend_corners(g: GeomDrawing, cell) -> int:
    """Bends on the boundary of a bounded cell whose interior angle is below a half-turn."""
    if cell.unbounded:
        raise UnboundedCell("the unbounded cell has no convex-bend guarantee")
    corners = cell_corners(g, cell)
    n = len(corners)
    count = 0
    for i, (p, kind) in enumerate(corners):
        if kind != "bend":
            continue
        prev, nxt = corners[i - 1][0], corners[(i + 1) % n][0]
        if orient(prev, p, nxt) > 0:
            count += 1
    return count


# -- independent cell oracle ------------------------------------------------------------


def _pseudo_angle(v):
    """Monotone rational stand-in for atan2 in [0, 4)."""
    x, y = v
    p = y / (abs(x) + abs(y))
    if x >= 0:
        return p if p >= 0 else 4 + p
    return 2 - p


def geometric_cells(g: GeomDrawing) -> list:
    """Sorted list of (vertex-incidences, segment-incidences) per face, computed from geometry alone."""
    pts_by_edge = {}
    vpoints = set(g.vertices.values())
    edge_list = list(g.edges)
    marks = defaultdict(list)  # edge -> [(piece, t, point)]
    for a_i, b_i in combinations(range(len(edge_list)), 2):
        e, f = edge_list[a_i], edge_list[b_i]
        for i, (a, b) in enumerate(_pieces(g.edges[e])):
            for j, (c, d) in enumerate(_pieces(g.edges[f])):
                hit = _param_intersection(a, b, c, d)
                if hit is None:
                    continue
                t, u = hit
                p = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
                if p in vpoints:
                    continue
                if t in (0, 1) or u in (0, 1):
                    raise DegenerateContact("contact at a bend")
                marks[e].append((i, t, p))
                marks[f].append((j, u, p))
    crossing_points = {p for lst in marks.values() for _, _, p in lst}
    real = vpoints | crossing_points
    out_edges = defaultdict(set)
    for e, poly in g.edges.items():
        seq = []
        ms = sorted(marks.get(e, []))
        k = 0
        for i in range(len(poly) - 1):
            seq.append(poly[i])
            while k < len(ms) and ms[k][0] == i:
                seq.append(ms[k][2])
                k += 1
        seq.append(poly[-1])
        pts_by_edge[e] = seq
        for p, q in zip(seq, seq[1:]):
            out_edges[p].add(q)
            out_edges[q].add(p)
    order = {p: sorted(nbrs, key=lambda q: _pseudo_angle(_sub(q, p))) for p, nbrs in out_edges.items()}
    index = {(p, q): i for p, nbrs in order.items() for i, q in enumerate(nbrs)}
    seen = set()
    faces = []
    for p, nbrs in order.items():
        for q in nbrs:
            if (p, q) in seen:
                continue
            nv = ns = 0
            h = (p, q)
            while h not in seen:
                seen.add(h)
                a, b = h
                if a in vpoints:
                    nv += 1
                if a in real:
                    ns += 1
                around = order[b]
                h = (b, around[(index[(b, a)] - 1) % len(around)])
            faces.append((nv, ns))
    if not faces and len(g.vertices) == 1:
        faces.append((1, 0))
    return sorted(faces)


def _param_intersection(a, b, c, d):
    r, s = _sub(b, a), _sub(d, c)
    den = _cross(r, s)
    if den == 0:
        return None
    t = _cross(_sub(c, a), s) / den
    u = _cross(_sub(c, a), r) / den
    if 0 <= t <= 1 and 0 <= u <= 1:
        return t, u
    return None


# -- fuzzing ---------------------------------------------------------------------------------


def random_geom_drawing(seed, n: int, p: float = 0.5, bends: int = 0, grid: int | None = None, attempts: int = 500):
    """Seeded random polyline drawing in general position with a connected planarization."""
    if n < 1 or not 0 <= p <= 1 or bends < 0:
        raise ValueError("need n >= 1, 0 <= p <= 1, bends >= 0")
    rng = random.Random(seed)
    size = grid or max(8, 4 * n)
    for _ in range(attempts):
        cells = rng.sample(range(size * size), n)
        verts = {f"v{i}": (c % size, c // size) for i, c in enumerate(cells)}
        edges = {}
        names = list(verts)
        for u, v in combinations(names, 2):
            if rng.random() < p:
                k = rng.randint(0, bends)
                pts = [(rng.randrange(size), rng.randrange(size)) for _ in range(k)]
                edges[f"e{len(edges)}"] = (u, v, pts)
        if not edges and n > 1:
            continue
        g = GeomDrawing.from_edges(verts, edges)
        try:
            to_combinatorial(g)
        except (DegenerateContact, DisconnectedPlanarization):
            continue
        return g
    raise GenerationFailed(f"no valid drawing after {attempts} attempts (seed={seed})")
