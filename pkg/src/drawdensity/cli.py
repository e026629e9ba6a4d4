"""Command-line front end: check, density, generate, export, fuzz.

Exit codes: 0 when every requested check passes, 1 when one fails (a witness is
printed), 2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

import networkx as nx

from . import classes, density, generators, geometry, properties
from .drawing import SPHERE, CellKind, Drawing, link_is_regular, link_of_vertex
from .errors import DrawingError, GenerationFailed, NTooSmall, NOdd, PreconditionFailed
from .formats import dump_drw, format_rational, load

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# the t values swept by the density identity checks
T_VALUES = tuple(Fraction(t) for t in (1, 2, 3, 4, 5, 6)) + tuple(
    Fraction(2 * k, 2 * k - 4) for k in range(3, 7)
)


def jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Enum):
        return obj.name
    if isinstance(obj, Drawing):
        return dump_drw(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return jsonable(obj.as_dict())
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(x) for x in obj), key=str)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def _emit(doc, json_path):
    if not json_path:
        return
    text = json.dumps(jsonable(doc), indent=2, sort_keys=True)
    if json_path == "-":
        print(text)
    else:
        Path(json_path).write_text(text + "\n", encoding="utf-8")


def _read(path):
    """Return (Drawing, GeomDrawing or None)."""
    obj = load(path)
    if isinstance(obj, geometry.GeomDrawing):
        return geometry.to_combinatorial(obj), obj
    return obj, None


# -- check -------------------------------------------------------------------------------------


def _class_check(d, g, name, k):
    name = name.lower()
    if name == "quasiplanar":
        return classes.is_quasiplanar(d)
    if name == "fan-crossing":
        return classes.is_fan_crossing(d)
    if name in ("k-planar", "planar"):
        return classes.is_k_planar(d, 0 if name == "planar" else _need_k(k, name))
    if name == "real-face":
        return classes.is_k_plus_real_face(d, _need_k(k, name))
    if name == "rac":
        if g is None:
            raise ValueError("the rac class needs a .geo input")
        return geometry.is_rac(g, _need_k(k, name))
    if name == "filled":
        return properties.is_filled(d)
    if name == "bipartite":
        try:
            return properties.Verdict(True, properties.bipartition(d))
        except properties.NotBipartite as exc:
            return properties.Verdict(False, exc.witness)
    raise ValueError(f"unknown class {name!r}")


def _need_k(k, name):
    if k is None:
        raise ValueError(f"--class {name} needs --k")
    return k


def cmd_check(args) -> int:
    d, g = _read(args.file)
    requested = []
    if args.cls:
        requested.append((f"class {args.cls}" + (f" k={args.k}" if args.k is not None else ""),
                          _class_check(d, g, args.cls, args.k)))
    if args.simple:
        requested.append(("simple", properties.is_simple(d)))
    if args.non_homotopic:
        requested.append(("non-homotopic", properties.is_non_homotopic(d)))
    report = classes.class_report(d)
    st = d.stats
    print(f"{args.file}: {st.n_vertices} vertices, {st.n_edges} edges, {st.n_crossings} crossings, "
          f"{st.n_cells} cells ({d.surface})")
    for key, value in report.as_dict().items():
        print(f"  {key}: {value}")
    failed = False
    results = {}
    for label, verdict in requested:
        status = "PASS" if verdict else "FAIL"
        failed |= not verdict
        line = f"{status} {label}"
        if not verdict and getattr(verdict, "witness", None) is not None:
            line += f"  witness: {verdict.witness}"
        print(line)
        results[label] = {"ok": bool(verdict), "witness": None if verdict else getattr(verdict, "witness", None)}
    _emit({"file": str(args.file), "stats": st, "classes": report, "checks": results}, args.json)
    return EXIT_FAIL if failed else EXIT_OK


# -- density -----------------------------------------------------------------------------------


def cmd_density(args) -> int:
    d, g = _read(args.file)
    ts = [Fraction(t) for t in args.t] if args.t else [Fraction(5)]
    doc = {"file": str(args.file), "evaluations": [], "catalog": []}
    bad = False
    for t in ts:
        ev = density.density_formula(d, t)
        bad |= ev.residual != 0
        print(f"t={format_rational(t)}: |E|={ev.n_edges} rhs={format_rational(ev.rhs)} "
              f"residual={format_rational(ev.residual)}")
        doc["evaluations"].append(ev)
    if args.lemmas:
        for r in density.check_catalog(d, g):
            if not r.applicable:
                continue
            mark = "holds" if r.holds else "VIOLATED"
            if r.holds and r.tight:
                mark += " (tight)"
            print(f"  {r.id}: {r.lhs} vs {r.rhs} {mark}")
            bad |= not r.holds
            doc["catalog"].append(r)
    _emit(doc, args.json)
    return EXIT_FAIL if bad else EXIT_OK


# -- generate / export -------------------------------------------------------------------------

FAMILIES = {
    "quasi8": generators.gen_quasiplanar_nonhomotopic,
    "quasi65": generators.gen_quasiplanar_simple,
    "oneplanar": generators.gen_one_planar_tight,
}


def cmd_generate(args) -> int:
    d = FAMILIES[args.family](args.n)
    text = dump_drw(d)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {len(d.vertices)} vertices, {len(d.paths)} edges")
    return EXIT_OK


def _layout(d: Drawing, g):
    """Node positions and segment polylines for drawing the planarization."""
    if g is not None:
        conv = g.conversion
        pts = {k: (float(x), float(y)) for k, (x, y) in conv.node_points.items()}
        polys = {s: [(float(x), float(-y)) for x, y in line] for s, line in conv.segment_polylines.items()}
        pts = {k: (x, -y) for k, (x, y) in pts.items()}
        return pts, polys
    h = nx.Graph()
    h.add_nodes_from(list(d.vertices) + list(d.crossings))
    for e, p in d.paths.items():
        h.add_edges_from(zip(p, p[1:]))
    planar, _ = nx.check_planarity(h)
    pos = nx.planar_layout(h) if planar else nx.spring_layout(h, seed=0)
    pts = {k: (float(x), float(-y)) for k, (x, y) in pos.items()}
    polys = {}
    for e, p in d.paths.items():
        for i in range(len(p) - 1):
            polys[(e, i)] = [pts[p[i]], pts[p[i + 1]]]
    return pts, polys


def render_svg(d: Drawing, g=None, size=480) -> str:
    pts, polys = _layout(d, g)
    xs = [x for line in polys.values() for x, _ in line] + [x for x, _ in pts.values()]
    ys = [y for line in polys.values() for _, y in line] + [y for _, y in pts.values()]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    scale = (size - 40) / max(hi_x - lo_x, hi_y - lo_y, 1e-9)

    def tr(p):
        return (20 + (p[0] - lo_x) * scale, 20 + (p[1] - lo_y) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for c in d.cells:
        corners = []
        for e, node, s in c.darts:
            i = d.segment_of((e, node, s))[1]
            line = polys[(e, i)] if s == 1 else polys[(e, i)][::-1]
            corners += [tr(p) for p in line[:-1]]
        fill = "none" if c.unbounded else "#e8eef7"
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in corners)
        out.append(f'<polygon class="cell" data-cell="{c.id}" data-size="{c.size}" points="{coords}" '
                   f'fill="{fill}" fill-opacity="0.5" stroke="none"/>')
    for (e, i), line in sorted(polys.items(), key=lambda item: (str(item[0][0]), item[0][1])):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tr, line))
        out.append(f'<polyline class="segment" data-edge="{e}" points="{coords}" fill="none" stroke="#222"/>')
    for node, p in pts.items():
        x, y = tr(p)
        if d.is_vertex(node):
            out.append(f'<circle class="vertex" cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#000"><title>{node}</title></circle>')
        else:
            out.append(f'<circle class="crossing" cx="{x:.2f}" cy="{y:.2f}" r="2" fill="#c33"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_export(args) -> int:
    d, g = _read(args.file)
    Path(args.svg).write_text(render_svg(d, g), encoding="utf-8")
    print(f"wrote {args.svg}: {len(d.cells)} cells")
    return EXIT_OK


# -- fuzz --------------------------------------------------------------------------------------


def invariant_suite(d: Drawing, g=None) -> dict:
    """Run every exact invariant on one drawing; returns counts and failure notes."""
    out = {"violations": [], "link_irregular_mismatches": 0, "link_checked": 0}
    if d.is_connected() and d.paths:
        for t in T_VALUES:
            if density.density_formula(d, t).residual != 0:
                out["violations"].append(f"density residual at t={t}")
    for r in density.check_catalog(d, g):
        if r.holds is False and r.id != "LINK":
            out["violations"].append(f"catalog {r.id}: {r.witness}")
    base = d.is_connected() and len(d.vertices) >= 3 and properties.is_non_homotopic(d)
    if base:
        for c in d.cells:
            if c.size in (3, 4, 5) and c.kind is CellKind.OTHER:
                out["violations"].append(f"untyped cell {c.id} of size {c.size}")
        for v in d.vertices:
            res = link_of_vertex(d, v, check=False)
            out["link_checked"] += 1
            if not res.holds:
                if not link_is_regular(d, v):
                    out["link_irregular_mismatches"] += 1
                else:
                    out["violations"].append(f"link identity at {v}: {res.c0_size} != {res.predicted}")
    if g is not None:
        combinatorial = sorted((c.vertex_incidences, c.segment_incidences) for c in d.cells)
        if geometry.geometric_cells(g) != combinatorial:
            out["violations"].append("geometric oracle disagrees on cell sizes")
    return out


def fuzz_drawings(seed: int, n: int, bends=None):
    """The seeded geometric drawing and its plane and sphere combinatorial forms."""
    g = geometry.random_geom_drawing(seed, n=n, p=0.35 + 0.1 * (seed % 3), bends=seed % 3 if bends is None else bends)
    plane = geometry.to_combinatorial(g)
    sphere = plane.replace(surface=SPHERE, outer_dart=None)
    return g, plane, sphere


def _fuzz_one(job):
    seed, n, bends = job
    g, plane, sphere = fuzz_drawings(seed, n, bends)
    a = invariant_suite(plane, g)
    b = invariant_suite(sphere)
    return {
        "seed": seed,
        "violations": a["violations"] + [f"sphere: {v}" for v in b["violations"]],
        "link_irregular_mismatches": a["link_irregular_mismatches"] + b["link_irregular_mismatches"],
        "link_checked": a["link_checked"] + b["link_checked"],
    }


def run_fuzz(seeds, n: int, bends=None, jobs: int = 1) -> dict:
    work = [(s, n, bends) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_fuzz_one, work))
    else:
        rows = [_fuzz_one(w) for w in work]
    return {
        "seeds": len(rows),
        "n": n,
        "violations": sum(len(r["violations"]) for r in rows),
        "link_checked": sum(r["link_checked"] for r in rows),
        "link_irregular_mismatches": sum(r["link_irregular_mismatches"] for r in rows),
        "failures": [r for r in rows if r["violations"]],
    }


def _seed_range(text):
    a, sep, b = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError("expected a..b")
    return range(int(a), int(b) + 1)


def cmd_fuzz(args) -> int:
    summary = run_fuzz(args.seeds, args.n, args.bends, args.jobs)
    lines = [
        f"seeds: {summary['seeds']} (n={summary['n']}, both surfaces)",
        f"violations: {summary['violations']}",
        f"link identity checked at {summary['link_checked']} vertices; "
        f"mismatches at irregular vertices: {summary['link_irregular_mismatches']}",
    ]
    for row in summary["failures"][:20]:
        lines.append(f"  seed {row['seed']}: {'; '.join(row['violations'])}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    _emit(summary, args.json)
    return EXIT_FAIL if summary["violations"] else EXIT_OK


# -- entry point -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drawdensity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a drawing and run predicates")
    c.add_argument("file")
    c.add_argument("--class", dest="cls", help="quasiplanar, fan-crossing, k-planar, planar, real-face, rac, filled, bipartite")
    c.add_argument("--simple", action="store_true")
    c.add_argument("--non-homotopic", action="store_true")
    c.add_argument("--k", type=int)
    c.add_argument("--json", metavar="PATH", help="write the structured report ('-' for stdout)")
    c.set_defaults(func=cmd_check)

    dn = sub.add_parser("density", help="evaluate the density identity and the inequality catalog")
    dn.add_argument("file")
    dn.add_argument("--t", action="append", help="rational parameter, repeatable (default 5)")
    dn.add_argument("--lemmas", action="store_true")
    dn.add_argument("--json", metavar="PATH")
    dn.set_defaults(func=cmd_density)

    gn = sub.add_parser("generate", help="write a tight example drawing")
    gn.add_argument("family", choices=sorted(FAMILIES))
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("-o", "--output")
    gn.set_defaults(func=cmd_generate)

    ex = sub.add_parser("export", help="render the planarization as SVG")
    ex.add_argument("file")
    ex.add_argument("--svg", required=True)
    ex.set_defaults(func=cmd_export)

    fz = sub.add_parser("fuzz", help="invariant sweep over seeded random drawings")
    fz.add_argument("--seeds", type=_seed_range, default=range(1, 201))
    fz.add_argument("--n", type=int, default=8)
    fz.add_argument("--bends", type=int, help="bends per edge (default: seed mod 3)")
    fz.add_argument("--jobs", type=int, default=1)
    fz.add_argument("--report")
    fz.add_argument("--json", metavar="PATH")
    fz.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DrawingError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NTooSmall, NOdd, GenerationFailed, PreconditionFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
