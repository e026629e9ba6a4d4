"""Text formats: ``.drw`` (combinatorial) and ``.geo`` (exact polylines).

``.drw`` is line oriented, ``#`` starts a comment::

    surface sphere|plane
    vertex <id>
    edge <id> <u> <v> [cross <x> ...]
    cross <x> <e> <f>
    rot <v> <e>@s|<e>@t ...          counterclockwise
    rotx <x> <e>@<segidx> ...        four entries, counterclockwise
    outerdart <e>@<segidx>@+|-       plane drawings only

``.geo``::

    vertex <id> <px>/<qx> <py>/<qy>
    edge <id> <u> <v> [via <x>/<y> ...]
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .drawing import PLANE, SPHERE, Drawing, build_drawing
from .errors import ParseError


def _tokens(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for piece in line.split():
            col = line.index(piece, col)
            toks.append((piece, col + 1))
            col += len(piece)
        if toks:
            yield lineno, toks


def _ident(tok, lineno, what="identifier"):
    word, col = tok
    if "@" in word:
        raise ParseError(f"bad {what} {word!r}", lineno, col)
    return word


def parse_drw(text: str) -> Drawing:
    surface = None
    vertices = []
    edges = []
    declared = {}
    vrot = {}
    xrot = {}
    outer = None
    for lineno, toks in _tokens(text):
        kw, kcol = toks[0]
        args = toks[1:]
        if kw == "surface":
            if len(args) != 1 or args[0][0] not in (SPHERE, PLANE):
                raise ParseError("expected 'surface sphere' or 'surface plane'", lineno, kcol)
            surface = args[0][0]
        elif kw == "vertex":
            if len(args) != 1:
                raise ParseError("expected 'vertex <id>'", lineno, kcol)
            vertices.append(_ident(args[0], lineno))
        elif kw == "edge":
            if len(args) < 3:
                raise ParseError("expected 'edge <id> <u> <v> [cross <x>...]'", lineno, kcol)
            eid, u, v = (_ident(t, lineno) for t in args[:3])
            rest = args[3:]
            xs = []
            if rest:
                if rest[0][0] != "cross":
                    raise ParseError(f"expected 'cross', got {rest[0][0]!r}", lineno, rest[0][1])
                xs = [_ident(t, lineno) for t in rest[1:]]
            edges.append((eid, u, v, xs))
        elif kw == "cross":
            if len(args) != 3:
                raise ParseError("expected 'cross <x> <e> <f>'", lineno, kcol)
            x, e, f = (_ident(t, lineno) for t in args)
            declared[x] = (e, f)
        elif kw == "rot":
            if len(args) < 1:
                raise ParseError("expected 'rot <v> <e>@s|t ...'", lineno, kcol)
            ends = []
            for word, col in args[1:]:
                parts = word.split("@")
                if len(parts) != 2 or parts[1] not in ("s", "t") or not parts[0]:
                    raise ParseError(f"bad edge-end {word!r}", lineno, col)
                ends.append((parts[0], parts[1]))
            vrot[_ident(args[0], lineno)] = ends
        elif kw == "rotx":
            if len(args) != 5:
                raise ParseError("expected 'rotx <x>' and four segment-ends", lineno, kcol)
            ends = []
            for word, col in args[1:]:
                parts = word.split("@")
                if len(parts) != 2 or not parts[1].isdigit() or not parts[0]:
                    raise ParseError(f"bad segment-end {word!r}", lineno, col)
                ends.append((parts[0], int(parts[1])))
            xrot[_ident(args[0], lineno)] = ends
        elif kw == "outerdart":
            if len(args) != 1:
                raise ParseError("expected 'outerdart <e>@<idx>@+|-'", lineno, kcol)
            word, col = args[0]
            parts = word.split("@")
            if len(parts) != 3 or not parts[1].isdigit() or parts[2] not in ("+", "-"):
                raise ParseError(f"bad outer dart {word!r}", lineno, col)
            outer = (parts[0], int(parts[1]), 1 if parts[2] == "+" else -1)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, kcol)
    if surface is None:
        raise ParseError("missing 'surface' line", 1, 1)
    return build_drawing(
        surface,
        vertices,
        edges,
        vrot,
        xrot,
        outer,
        declared_crossings=declared or None,
    )


def dump_drw(d: Drawing) -> str:
    out = [f"surface {d.surface}"]
    out += [f"vertex {v}" for v in d.vertices]
    for e, p in d.paths.items():
        line = f"edge {e} {p[0]} {p[-1]}"
        if len(p) > 2:
            line += " cross " + " ".join(p[1:-1])
        out.append(line)
    for x in d.crossings:
        out.append(f"cross {x} {' '.join(d.crossing_edges(x))}")
    for v in d.vertices:
        rot = d.rotation.get(v, ())
        if rot:
            out.append("rot " + v + " " + " ".join(f"{e}@{'s' if s == 1 else 't'}" for e, s in rot))
    for x in d.crossings:
        ends = []
        for e, s in d.rotation[x]:
            ends.append(f"{e}@{d.segment_of((e, x, s))[1]}")
        out.append(f"rotx {x} {' '.join(ends)}")
    if d.surface == PLANE and d.outer_dart is not None:
        e, n, s = d.outer_dart
        idx = d.segment_of(d.outer_dart)[1]
        out.append(f"outerdart {e}@{idx}@{'+' if s == 1 else '-'}")
    return "\n".join(out) + "\n"


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _rational(word, lineno, col) -> Fraction:
    try:
        if "." in word or "e" in word.lower():
            raise ValueError
        return Fraction(word)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected an exact rational p/q, got {word!r}", lineno, col) from None


def parse_geo(text: str):
    from .geometry import GeomDrawing

    vertices = {}
    edges = {}
    for lineno, toks in _tokens(text):
        kw, kcol = toks[0]
        args = toks[1:]
        if kw == "vertex":
            if len(args) != 3:
                raise ParseError("expected 'vertex <id> <x> <y>'", lineno, kcol)
            vertices[_ident(args[0], lineno)] = (
                _rational(args[1][0], lineno, args[1][1]),
                _rational(args[2][0], lineno, args[2][1]),
            )
        elif kw == "edge":
            if len(args) < 3:
                raise ParseError("expected 'edge <id> <u> <v> [via ...]'", lineno, kcol)
            eid, u, v = (_ident(t, lineno) for t in args[:3])
            bends = []
            rest = args[3:]
            if rest:
                if rest[0][0] != "via":
                    raise ParseError(f"expected 'via', got {rest[0][0]!r}", lineno, rest[0][1])
                for word, col in rest[1:]:
                    parts = word.split("/")
                    if len(parts) == 2:
                        xs, ys = parts
                    elif len(parts) == 4:
                        xs, ys = "/".join(parts[:2]), "/".join(parts[2:])
                    else:
                        raise ParseError(f"bend point must be <x>/<y> or <px>/<qx>/<py>/<qy>, got {word!r}", lineno, col)
                    bends.append((_rational(xs, lineno, col), _rational(ys, lineno, col)))
            edges[eid] = (u, v, bends)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, kcol)
    return GeomDrawing.from_edges(vertices, edges)


def dump_geo(g) -> str:
    out = []
    for v, (x, y) in g.vertices.items():
        out.append(f"vertex {v} {format_rational(x)} {format_rational(y)}")
    for e, pts in g.edges.items():
        u, v = g.ends[e]
        line = f"edge {e} {u} {v}"
        if len(pts) > 2:
            line += " via " + " ".join(_bend(x, y) for x, y in pts[1:-1])
        out.append(line)
    return "\n".join(out) + "\n"


def _bend(x, y) -> str:
    x, y = Fraction(x), Fraction(y)
    if x.denominator == 1 and y.denominator == 1:
        return f"{x.numerator}/{y.numerator}"
    # integer bends read as x/y; general ones need all four parts
    return f"{format_rational(x)}/{format_rational(y)}"


def load(path) -> object:
    """Read a ``.drw`` file into a Drawing or a ``.geo`` file into a GeomDrawing."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".geo":
        return parse_geo(text)
    return parse_drw(text)
