"""Tight example drawings and edge-adding surgeries.

The quasiplanar families are built in a two-disk model: the vertices sit on a cycle
C, everything drawn inside C is a straight chord of one disk, everything outside
a straight chord of a second (mirrored) disk, and an edge may switch disks at a
"pass point" halfway along a cycle edge.  Slots on the circle are numbered in
half-steps: vertex ``i`` is slot ``2i`` and the pass point on the cycle edge
``(i, i+1)`` is slot ``2i+1``.
"""
from __future__ import annotations

import random
from collections import defaultdict
from fractions import Fraction
from itertools import combinations

import networkx as nx

from .classes import is_quasiplanar
from .drawing import SPHERE, CellKind, Drawing
from .errors import GenerationFailed, NOdd, NTooSmall, PreconditionFailed
from .properties import is_non_homotopic, is_simple, unfilled_pairs

INSIDE, OUTSIDE = 0, 1


def _v(i, n):
    return f"v{i % n}"


# -- two-disk chord model ---------------------------------------------------------


def _circle(L, rng):
    """L exact rational points on the unit circle in counterclockwise order."""
    pts = []
    for k in range(L):
        t = Fraction(2 * k - L, 2) + Fraction(rng.randint(1, 997), 2003)
        pts.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return pts


def _interleave(a, b, c, d, L):
    if len({a % L, b % L, c % L, d % L}) < 4:
        return False

    def inside(x):
        return 0 < (x - a) % L < (b - a) % L

    return inside(c) != inside(d)


def _intersect(p, q, r, s):
    """Parameters along pq and rs of the intersection of the two segments."""
    u = (q[0] - p[0], q[1] - p[1])
    v = (s[0] - r[0], s[1] - r[1])
    w = (r[0] - p[0], r[1] - p[1])
    den = u[0] * v[1] - u[1] * v[0]
    return (w[0] * v[1] - w[1] * v[0]) / den, (w[0] * u[1] - w[1] * u[0]) / den


def _ccw_key(v):
    # exact pseudo-angle, monotone in the polar angle
    x, y = v
    p = y / (abs(x) + abs(y))
    if x >= 0:
        return p if p >= 0 else 4 + p
    return 2 - p


def chord_drawing(n: int, specs, seed: int = 0) -> Drawing:
    """Realize a two-disk chord drawing on the cycle ``v0 ... v(n-1)``.

    ``specs`` lists ``(edge id, [(disk, slot_from, slot_to), ...])``; consecutive
    pieces meet at an odd (pass) slot.  The cycle edges ``c{i}`` are added here.
    """
    L = 2 * n
    pieces = []  # (disk, eid, piece index, a, b)
    passes = {}  # pass slot -> edge id
    for eid, route in specs:
        for k, (disk, a, b) in enumerate(route):
            pieces.append((disk, eid, k, a % L, b % L))
            if k < len(route) - 1:
                slot = b % L
                if slot % 2 != 1 or slot in passes or route[k + 1][1] % L != slot:
                    raise GenerationFailed(f"bad pass slot {slot} for {eid}")
                passes[slot] = eid
    for disk in (INSIDE, OUTSIDE):
        seen = set()
        for p in pieces:
            if p[0] == disk:
                key = frozenset((p[3], p[4]))
                if key in seen:
                    raise GenerationFailed(f"two identical chords {sorted(key)} in one disk")
                seen.add(key)

    for attempt in range(64):
        rng = random.Random(seed * 1000 + attempt)
        circles = {INSIDE: _circle(L, rng), OUTSIDE: _circle(L, rng)}

        def at(disk, slot):
            return circles[disk][slot] if disk == INSIDE else circles[disk][(-slot) % L]

        marks = defaultdict(list)  # (eid, piece) -> [(param, crossing id)]
        cross_rot = {}
        count = 0
        ok = True
        for disk in (INSIDE, OUTSIDE):
            mine = [p for p in pieces if p[0] == disk]
            for P, Q in combinations(mine, 2):
                _, e, i, a, b = P
                _, f, j, c, d = Q
                if not _interleave(a, b, c, d, L):
                    continue
                A, B, C, D = at(disk, a), at(disk, b), at(disk, c), at(disk, d)
                s, t = _intersect(A, B, C, D)
                count += 1
                x = f"x{count}"
                marks[(e, i)].append((s, x))
                marks[(f, j)].append((t, x))
                rays = [
                    ((e, 1), (B[0] - A[0], B[1] - A[1])),
                    ((e, -1), (A[0] - B[0], A[1] - B[1])),
                    ((f, 1), (D[0] - C[0], D[1] - C[1])),
                    ((f, -1), (C[0] - D[0], C[1] - D[1])),
                ]
                cross_rot[x] = [r for r, _ in sorted(rays, key=lambda item: _ccw_key(item[1]))]
        for lst in marks.values():
            params = [s for s, _ in lst]
            if len(set(params)) != len(params):
                ok = False  # three chords through one point; jitter again
        if ok:
            break
    else:
        raise GenerationFailed("could not place chords in general position")

    paths = {}
    rotation = dict(cross_rot)
    for i in range(n):
        slot = 2 * i + 1
        mid = (f"p{i}",) if slot in passes else ()
        paths[f"c{i}"] = (_v(i, n), *mid, _v(i + 1, n))
    for eid, route in specs:
        nodes = [_v(route[0][1] // 2, n)]
        for k, (disk, a, b) in enumerate(route):
            nodes += [x for _, x in sorted(marks.get((eid, k), []))]
            if k < len(route) - 1:
                nodes.append(f"p{(b % L) // 2}")
        nodes.append(_v((route[-1][2] % L) // 2, n))
        paths[eid] = tuple(nodes)

    # rays at boundary slots, grouped by side
    at_slot = defaultdict(lambda: {INSIDE: [], OUTSIDE: []})
    # every piece leaves its start slot forwards and its end slot backwards
    for disk, eid, k, a, b in pieces:
        at_slot[a][disk].append((b, (eid, 1)))
        at_slot[b][disk].append((a, (eid, -1)))
    for i in range(n):
        p = 2 * i
        ins = sorted(at_slot[p][INSIDE], key=lambda item: (item[0] - p) % L)
        outs = sorted(at_slot[p][OUTSIDE], key=lambda item: (p - item[0]) % L)
        rotation[_v(i, n)] = (
            [(f"c{i}", 1)] + [r for _, r in ins] + [(f"c{(i - 1) % n}", -1)] + [r for _, r in outs]
        )
    for slot in passes:
        i = slot // 2
        ins = at_slot[slot][INSIDE]
        outs = at_slot[slot][OUTSIDE]
        rotation[f"p{i}"] = [(f"c{i}", 1), ins[0][1], (f"c{i}", -1), outs[0][1]]
    return Drawing(SPHERE, [_v(i, n) for i in range(n)], paths, rotation)


def _d3_route(i, n, start_inside=True):
    a, p, b = 2 * i, 2 * i + 3, 2 * (i + 3)
    first, second = (INSIDE, OUTSIDE) if start_inside else (OUTSIDE, INSIDE)
    return [(first, a, p), (second, p, b)]


def zigzag(n: int, sigma: int) -> set:
    """Vertex pairs at cycle distance >= 3 whose index sum is sigma or sigma+1 mod n."""
    out = set()
    for a, b in combinations(range(n), 2):
        dist = min(b - a, n - (b - a))
        if dist >= 3 and (a + b) % n in (sigma % n, (sigma + 1) % n):
            out.add(frozenset((a, b)))
    return out


def _zig_specs(prefix, pairs, disk, n):
    specs = []
    for k, pair in enumerate(sorted(tuple(sorted(p)) for p in pairs)):
        a, b = pair
        specs.append((f"{prefix}_{k}", [(disk, 2 * a, 2 * b)]))
    return specs


# -- the 8n - 20 family -----------------------------------------------------------------


def gen_quasiplanar_nonhomotopic(n: int) -> Drawing:
    """Non-homotopic quasiplanar drawing with 8n - 20 edges on n >= 4 vertices."""
    if n < 4:
        raise NTooSmall("the construction needs n >= 4")
    if n == 4:
        specs = [
            ("in2_0", [(INSIDE, 0, 4)]),
            ("in2_1", [(INSIDE, 2, 6)]),
            ("out2_0", [(OUTSIDE, 0, 4)]),
            ("out2_1", [(OUTSIDE, 2, 6)]),
        ] + [(f"d3_{i}", _d3_route(i, n)) for i in range(4)]
        return _checked(chord_drawing(n, specs), 12, homotopy=True)
    specs = []
    for i in range(n):
        specs.append((f"in2_{i}", [(INSIDE, 2 * i, 2 * i + 4)]))
        specs.append((f"out2_{i}", [(OUTSIDE, 2 * i, 2 * i + 4)]))
        specs.append((f"d3_{i}", _d3_route(i, n)))
    for s in (0, 1):
        pairs = zigzag(n, 2 * s)
        specs += _zig_specs(f"zin{s}", pairs, INSIDE, n)
        specs += _zig_specs(f"zout{s}", pairs, OUTSIDE, n)
    return _checked(chord_drawing(n, specs), 8 * n - 20, homotopy=True)


def _checked(d: Drawing, edges: int, homotopy=False, simple=False) -> Drawing:
    if len(d.paths) != edges:
        raise GenerationFailed(f"expected {edges} edges, built {len(d.paths)}")
    if not is_quasiplanar(d):
        raise GenerationFailed("construction is not quasiplanar")
    if homotopy and not is_non_homotopic(d):
        raise GenerationFailed("construction has an empty lens")
    if simple and not is_simple(d):
        raise GenerationFailed("construction is not simple")
    return d


# -- the 6.5n - 20 family ----------------------------------------------------------------


def _zig_variants(n, sigma, forbidden):
    """Zigzag edge sets with classes sigma, sigma+1, optionally shifting a distance-3 end edge."""
    base = zigzag(n, sigma)
    ends = [p for p in base if _dist(p, n) == 3]
    options = []
    for end in ends:
        a, b = _short_arc(end, n)  # b = a + 3 along the short arc
        nbr = [q for q in base if _dist(q, n) == 4 and q & end]
        alts = [None]
        for q in nbr:
            shared = next(iter(q & end))
            shift = 1 if shared == a else -1
            alts.append(frozenset(((a + shift) % n, (b + shift) % n)))
        options.append((end, alts))
    variants = []

    def rec(k, current):
        if k == len(options):
            if not current & forbidden:
                variants.append(frozenset(current))
            return
        end, alts = options[k]
        for alt in alts:
            if alt is None:
                rec(k + 1, current)
            else:
                rec(k + 1, (current - {end}) | {alt})

    rec(0, set(base))
    # prefer untouched zigzags
    variants.sort(key=lambda s: len(s - base))
    return variants


def _dist(pair, n):
    a, b = sorted(pair)
    return min(b - a, n - (b - a))


def _short_arc(pair, n):
    a, b = sorted(pair)
    return (a, b) if b - a <= n - (b - a) else (b, a + n)


def gen_quasiplanar_simple(n: int) -> Drawing:
    """Simple quasiplanar drawing with 6.5n - 20 edges, n even and >= 8.

    Only n >= 16 can be realized this way.  Every non-crossing set of n - 5 long
    chords has two chords at cycle distance 3, the four sets need eight such
    chords, and half of the n distance-3 pairs are already taken by the edges
    through the cycle.  For n = 8 no simple graph at all has 32 edges.
    Smaller n raise GenerationFailed.
    """
    if n % 2:
        raise NOdd("the construction needs even n")
    if n < 8:
        raise NTooSmall("the construction needs n >= 8")
    specs = []
    d3 = set()
    for i in range(0, n, 2):
        specs.append((f"in2_{i}", [(INSIDE, 2 * i, 2 * i + 4)]))
        specs.append((f"out2_{i + 1}", [(OUTSIDE, 2 * i + 2, 2 * i + 6)]))
        specs.append((f"d3_{i}", _d3_route(i, n)))
        d3.add(frozenset((i, (i + 3) % n)))
    candidates = []
    for sigma in range(n):
        for var in _zig_variants(n, sigma, d3):
            candidates.append(var)
    for family in _disjoint_families(candidates, 4):
        zspecs = []
        for k, pairs in enumerate(family):
            disk = INSIDE if k < 2 else OUTSIDE
            zspecs += _zig_specs(f"z{k}", pairs, disk, n)
        try:
            d = chord_drawing(n, specs + zspecs)
            return _checked(d, 13 * n // 2 - 20, simple=True)
        except GenerationFailed:
            continue
    raise GenerationFailed(f"no zigzag family found for n={n}")


def _disjoint_families(candidates, k):
    """Yield k pairwise edge-disjoint candidate sets, in a deterministic order."""

    def rec(start, chosen, used):
        if len(chosen) == k:
            yield list(chosen)
            return
        for i in range(start, len(candidates)):
            c = candidates[i]
            if c & used:
                continue
            yield from rec(i + 1, chosen + [c], used | c)

    yield from rec(0, [], frozenset())


# -- folklore 4n - 8 one-planar family -------------------------------------------------------


def _pseudo_double_wheel(n: int) -> Drawing:
    """Planar quadrangulation: cycle c0..c(m-1), pole a on even, pole b on odd positions."""
    m = n - 2
    verts = ["a", "b"] + [f"c{i}" for i in range(m)]
    paths = {}
    for i in range(m):
        paths[f"r{i}"] = (f"c{i}", f"c{(i + 1) % m}")
        pole = "a" if i % 2 == 0 else "b"
        paths[f"s{i}"] = (pole, f"c{i}")
    rotation = {
        "a": [(f"s{i}", 1) for i in range(0, m, 2)],
        "b": [(f"s{i}", 1) for i in range(m - 1, 0, -2)],
    }
    for i in range(m):
        rot = []
        if i % 2 == 1:
            rot.append((f"s{i}", -1))
        rot.append((f"r{i}", 1))
        if i % 2 == 0:
            rot.append((f"s{i}", -1))
        rot.append((f"r{(i - 1) % m}", -1))
        rotation[f"c{i}"] = rot
    return Drawing(SPHERE, verts, paths, rotation)


def add_crossing_diagonals(d: Drawing, cells) -> Drawing:
    """Draw both diagonals, crossing once, inside each given 4-vertex cell."""
    paths = dict(d.paths)
    rotation = {k: list(v) for k, v in d.rotation.items()}
    taken = set(d.paths) | set(d.vertices) | set(d.crossings)
    k = 0
    for c in cells:
        if len(c.darts) != 4 or c.crossing_incidences:
            raise PreconditionFailed("diagonals need a cell bounded by four vertices")
        nodes = [dart[1] for dart in c.darts]
        k += 1
        while f"q{k}" in taken or f"y{k}" in taken or f"z{k}" in taken:
            k += 1
        x, e, f = f"y{k}", f"q{k}", f"z{k}"
        paths[e] = (nodes[0], x, nodes[2])
        paths[f] = (nodes[1], x, nodes[3])
        rotation[x] = [(e, -1), (f, -1), (e, 1), (f, 1)]
        for dart, ray in zip(c.darts, [(e, 1), (f, 1), (e, -1), (f, -1)]):
            rot = rotation[dart[1]]
            rot.insert(rot.index((dart[0], dart[2])) + 1, ray)
    return Drawing(d.surface, d.vertices, paths, rotation, d.outer_dart)


def gen_one_planar_tight(n: int) -> Drawing:
    """1-planar drawing with 4n - 8 edges: a quadrangulation plus crossing diagonals in every face."""
    if n < 8:
        raise NTooSmall("the construction needs n >= 8")
    if n % 2:
        raise NOdd("the construction needs even n")
    q = _pseudo_double_wheel(n)
    return add_crossing_diagonals(q, q.cells)


# -- surgeries -------------------------------------------------------------------------------


def insert_uncrossed_edge(d: Drawing, cell, u, v, eid=None) -> Drawing:
    """Add an uncrossed edge u -> v through ``cell`` (at the first corner of each vertex)."""
    du = next(dart for dart in cell.darts if dart[1] == u)
    dv = next(dart for dart in cell.darts if dart[1] == v)
    eid = eid or _fresh("f", set(d.paths) | set(d.vertices) | set(d.crossings))
    paths = dict(d.paths)
    paths[eid] = (u, v)
    rotation = {k: list(r) for k, r in d.rotation.items()}
    for dart, ray in ((du, (eid, 1)), (dv, (eid, -1))):
        rot = rotation[dart[1]]
        rot.insert(rot.index((dart[0], dart[2])) + 1, ray)
    return Drawing(d.surface, d.vertices, paths, rotation, d.outer_dart)


def _fresh(prefix, taken):
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


def fill(d: Drawing, max_steps: int = 10_000) -> Drawing:
    """Add uncrossed edges until every two vertices sharing a cell are joined along it."""
    failed = []
    if not is_non_homotopic(d):
        failed.append("non-homotopic")
    if not is_quasiplanar(d):
        failed.append("quasiplanar")
    if failed:
        raise PreconditionFailed(f"fill needs: {', '.join(failed)}", failed)
    for _ in range(max_steps):
        gap = next(unfilled_pairs(d), None)
        if gap is None:
            return d
        c, u, v = gap
        d = insert_uncrossed_edge(d, c, u, v)
    raise GenerationFailed("fill did not terminate")


def remove_edge(d: Drawing, e) -> Drawing:
    """Delete edge ``e`` together with its crossings."""
    old = d.paths[e]
    xs = set(old[1:-1])
    paths = {}
    for f, p in d.paths.items():
        if f != e:
            paths[f] = tuple(node for node in p if node not in xs)
    rotation = {}
    for node, rot in d.rotation.items():
        if node in xs:
            continue
        rotation[node] = [r for r in rot if r[0] != e]
    outer = d.outer_dart
    if outer is not None and (outer[0] == e or outer[1] in xs):
        cell = d.cells[d.dart_cell[outer]]
        outer = next(
            (x for x in cell.darts if x[0] != e and x[1] not in xs),
            None,
        )
    return Drawing(d.surface, d.vertices, paths, rotation, outer)


def _graph(d: Drawing):
    g = nx.Graph()
    g.add_nodes_from(d.vertices)
    g.add_edges_from(d.endpoints(e) for e in d.paths)
    return g


def fill_simple(d: Drawing, max_steps: int = 10_000) -> Drawing:
    """Fill a simple quasiplanar drawing of a 3-connected graph, keeping it simple.

    When the new uncrossed edge uv duplicates an existing (necessarily crossed) uv,
    the old copy is removed, so the crossing number strictly drops.
    """
    failed = []
    if not is_simple(d):
        failed.append("simple")
    if not is_quasiplanar(d):
        failed.append("quasiplanar")
    g = _graph(d)
    if len(g) < 4 or nx.node_connectivity(g) < 3:
        failed.append("3-connected")
    if failed:
        raise PreconditionFailed(f"fill_simple needs: {', '.join(failed)}", failed)
    for _ in range(max_steps):
        gaps = list(unfilled_pairs(d))
        if not gaps:
            return d
        pairs = {frozenset(d.endpoints(e)) for e in d.paths}
        # re-route existing crossed edges first
        c, u, v = next((gap for gap in gaps if frozenset(gap[1:]) in pairs), gaps[0])
        old = [e for e in d.paths if set(d.endpoints(e)) == {u, v}]
        if any(len(d.paths[e]) == 2 for e in old):
            raise GenerationFailed(f"uncrossed edge {u}{v} off the cell contradicts 3-connectivity")
        before = len(d.crossings)
        d = insert_uncrossed_edge(d, c, u, v)
        for e in old:
            d = remove_edge(d, e)
        assert len(d.crossings) <= before
    raise GenerationFailed("fill_simple did not terminate")


def _t_cells(d: Drawing):
    return [c for c in d.cells if c.kind is CellKind.T6]


def eliminate_t_cells(d: Drawing, max_steps: int = 10_000) -> Drawing:
    """Remove every T6 cell by routing a new edge from one corner alongside a neighbouring edge.

    If a step leaves two co-incident vertices unjoined (the cell across the crossed
    side meets the corner vertex twice), the result is filled again before going on.
    """
    failed = []
    if not d.is_connected():
        failed.append("connected")
    if len(d.vertices) < 4:
        failed.append("|V| >= 4")
    if not is_non_homotopic(d):
        failed.append("non-homotopic")
    if not is_quasiplanar(d):
        failed.append("quasiplanar")
    if next(unfilled_pairs(d), None) is not None:
        failed.append("filled")
    if failed:
        raise PreconditionFailed(f"eliminate_t_cells needs: {', '.join(failed)}", failed)
    for _ in range(max_steps):
        cells = _t_cells(d)
        if not cells:
            return d
        d = _eliminate_one(d, cells[0])
        if next(unfilled_pairs(d), None) is not None:
            d = fill(d)
    raise GenerationFailed("T-cell elimination did not terminate")


def _sigma(d: Drawing, node, ray):
    rot = d.rotation[node]
    return rot[(rot.index(ray) + 1) % len(rot)]


def _eliminate_one(d: Drawing, cell) -> Drawing:
    darts = cell.darts  # v0 -> v1 -> v2, counterclockwise around the cell
    corners = []
    for i in range(3):
        vi = darts[i][1]
        back = darts[i - 1]  # dart v_{i-1} -> v_i; its reverse ray leaves v_i
        ray_back = (back[0], -back[2])
        e0 = _sigma(d, vi, ray_back)
        u = d.other_end(e0[0], vi)
        if u not in (vi, darts[(i + 1) % 3][1]):
            corners.append(i)
    if not corners:
        raise GenerationFailed("no edge to follow out of the T-cell")
    # a cell meeting v0 at two corners can keep v0 and v2 together after f gets
    # crossed; another corner of the T-cell avoids that
    first = None
    for i in corners:
        out = _route_new_edge(d, darts, i)
        if next(unfilled_pairs(out), None) is None:
            return out
        first = first or out
    return first


def _route_new_edge(d: Drawing, darts, i) -> Drawing:
    v0, v1 = darts[i][1], darts[(i + 1) % 3][1]
    f = darts[(i + 2) % 3][0]  # uncrossed edge v2 -> v0
    e0_ray = _sigma(d, v0, (f, -darts[(i + 2) % 3][2]))
    e0 = e0_ray[0]
    u = d.other_end(e0, v0)

    taken = set(d.paths) | set(d.vertices) | set(d.crossings)
    e = _fresh("t", taken)
    taken.add(e)
    paths = dict(d.paths)
    rotation = {k: list(r) for k, r in d.rotation.items()}

    # crossing y with f, next to v0
    y = _fresh("y", taken)
    taken.add(y)
    fp = paths[f]
    if fp[0] == v0:
        paths[f] = (v0, y, fp[1])
        f_to_v0, f_to_v2 = (f, -1), (f, 1)
    else:
        paths[f] = (fp[0], y, v0)
        f_to_v0, f_to_v2 = (f, 1), (f, -1)
    rotation[y] = [(e, 1), f_to_v0, (e, -1), f_to_v2]
    nodes = [v1, y]

    # follow e0 from v0 to u on its right-hand side
    path0 = d.paths[e0]
    fwd = 1 if path0[0] == v0 else -1
    walk = path0 if fwd == 1 else path0[::-1]
    for x in walk[1:-1]:
        rot = d.rotation[x]
        back_ray = (e0, -fwd)
        right = rot[(rot.index(back_ray) + 1) % 4]
        g, gs = right
        z = _fresh("z", taken)
        taken.add(z)
        gp = list(paths[g])
        k = gp.index(x)
        gp.insert(k + 1 if gs == 1 else k, z)
        paths[g] = tuple(gp)
        # at z: e forward, g back toward x, e backward, g onwards
        rotation[z] = [(e, 1), (g, -gs), (e, -1), (g, gs)]
        nodes.append(z)
    nodes.append(u)
    paths[e] = tuple(nodes)

    d1 = darts[(i + 1) % 3]  # v1 -> v2
    rot = rotation[v1]
    rot.insert(rot.index((d1[0], d1[2])) + 1, (e, 1))
    rot = rotation[u]
    at_u = (e0, -fwd)
    rot.insert(rot.index(at_u) + 1, (e, -1))
    return Drawing(d.surface, d.vertices, paths, rotation, d.outer_dart)
