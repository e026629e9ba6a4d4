"""Exact evaluation of the density identity, the inequality catalog and the bound table."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .classes import is_fan_crossing, is_k_planar, is_k_plus_real_face, is_quasiplanar
from .drawing import CellKind, Drawing, link_of_vertex
from .errors import NotBipartite, NTooSmall, PreconditionFailed, UnknownClass
from .properties import (
    bipartition,
    is_filled,
    is_non_homotopic,
    is_simple,
    max_distinct_vertices_per_cell,
)


@dataclass(frozen=True)
class DensityEvaluation:
    t: Fraction
    n_edges: int
    vertex_term: Fraction  # t(|V| - 2)
    cell_sum: Fraction  # sum over cells of ((t-1)/4 |c| - t)
    n_crossings: int
    rhs: Fraction
    residual: Fraction
    r: Fraction | None
    c3: int
    c4: int
    c5: int
    excess: int  # sum over cells of size >= 5 of (|c| - 5)
    decompositions: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.residual == 0


def _require_connected_edges(d: Drawing):
    failed = []
    if not d.is_connected():
        failed.append("connected")
    if not d.paths:
        failed.append("|E| >= 1")
    if failed:
        raise PreconditionFailed(f"density identity needs: {', '.join(failed)}", failed)


def density_formula(d: Drawing, t) -> DensityEvaluation:
    _require_connected_edges(d)
    t = Fraction(t)
    sizes = [c.size for c in d.cells]
    n_v, n_e, n_x = len(d.vertices), len(d.paths), len(d.crossings)
    vertex_term = t * (n_v - 2)
    total, n_c = sum(sizes), len(sizes)
    # the cell term is linear in |c|, so it only needs the size total
    cell_sum = (t - 1) / 4 * total - t * n_c
    rhs = vertex_term - cell_sum - n_x
    c3 = sizes.count(3)
    c4 = sizes.count(4)
    c5 = sizes.count(5)
    excess = sum(s - 5 for s in sizes if s >= 5)
    # the t=4 and t=5 forms: exact value and the cell-count expression it is compared with
    four = 4 * n_v - 8 - (Fraction(3, 4) * total - 4 * n_c) - n_x
    four_bound = 4 * n_v - 8 + Fraction(7, 4) * c3 + c4 + Fraction(1, 4) * c5 - n_x
    five = 5 * n_v - 10 - (total - 5 * n_c) - n_x
    five_cells = 5 * n_v - 10 + 2 * c3 + c4 - n_x - excess
    return DensityEvaluation(
        t=t,
        n_edges=n_e,
        vertex_term=vertex_term,
        cell_sum=cell_sum,
        n_crossings=n_x,
        rhs=rhs,
        residual=n_e - rhs,
        r=None if t == 1 else 4 * t / (t - 1),
        c3=c3,
        c4=c4,
        c5=c5,
        excess=excess,
        decompositions={
            4: {"value": four, "bound": four_bound, "holds": n_e == four <= four_bound},
            5: {"value": Fraction(five), "cells": Fraction(five_cells), "holds": n_e == five == five_cells},
        },
    )


# -- inequality catalog -------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    label: str
    lhs: Fraction
    rhs: Fraction
    relation: str  # "<=" or "="

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs if self.relation == "=" else self.lhs <= self.rhs

    @property
    def tight(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class InequalityReport:
    id: str
    preconditions: dict
    parts: tuple = ()
    witness: object = None
    slack: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return all(self.preconditions.values())

    @property
    def holds(self) -> bool | None:
        if not self.applicable:
            return None
        return all(p.holds for p in self.parts)

    @property
    def lhs(self):
        return self.parts[0].lhs if self.parts else None

    @property
    def rhs(self):
        return self.parts[0].rhs if self.parts else None

    @property
    def tight(self) -> bool:
        return bool(self.applicable and self.parts and all(p.tight for p in self.parts))

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "preconditions": dict(self.preconditions),
            "applicable": self.applicable,
            "holds": self.holds,
            "tight": self.tight,
            "parts": [
                {"label": p.label, "lhs": str(p.lhs), "rhs": str(p.rhs), "relation": p.relation, "holds": p.holds}
                for p in self.parts
            ],
            "witness": None if self.witness is None else str(self.witness),
            "slack": {k: str(v) for k, v in self.slack.items()},
        }


class Facts:
    """Lazily computed properties of one drawing, shared between catalog entries."""

    def __init__(self, d: Drawing, geom=None):
        self.d = d
        self.geom = geom

    @cached_property
    def connected(self):
        return self.d.is_connected()

    @cached_property
    def non_homotopic(self):
        return bool(is_non_homotopic(self.d))

    @cached_property
    def simple(self):
        return bool(is_simple(self.d))

    @cached_property
    def filled(self):
        return bool(is_filled(self.d))

    @cached_property
    def quasiplanar(self):
        return bool(is_quasiplanar(self.d))

    @cached_property
    def fan_crossing(self):
        return bool(is_fan_crossing(self.d))

    @cached_property
    def bipartite(self):
        try:
            bipartition(self.d)
            return True
        except NotBipartite:
            return False

    @cached_property
    def max_distinct(self):
        return max_distinct_vertices_per_cell(self.d)

    @cached_property
    def min_degree(self):
        return min((self.d.degree(v) for v in self.d.vertices), default=0)

    @property
    def n(self):
        return len(self.d.vertices)

    def count(self, kind):
        return self.d.stats.count(kind)

    @cached_property
    def sizes(self):
        return [c.size for c in self.d.cells]

    def c(self, i):
        return self.sizes.count(i)

    @cached_property
    def excess(self):
        return sum(s - 5 for s in self.sizes if s >= 5)

    def rac(self, k):
        if self.geom is None:
            return False
        from .geometry import is_rac

        return bool(is_rac(self.geom, k))

    def slack(self):
        return {
            "|X|": len(self.d.crossings),
            "|C3|": self.c(3),
            "|C4|": self.c(4),
            "|C5|": self.c(5),
            "excess": self.excess,
        }


def _F(x):
    return Fraction(x)


def _obs1(f: Facts, params):
    st = f.d.stats
    return {}, [
        Comparison("|S| = 2|X| + |E|", _F(st.n_segments), _F(2 * st.n_crossings + st.n_edges), "="),
        Comparison(
            "|S_in| = 2|X| - |E_x|",
            _F(st.n_inner_segments),
            _F(2 * st.n_crossings - st.n_crossed_edges),
            "=",
        ),
    ]


_BASE = ("connected", "non-homotopic", "|V| >= 3")


def _pre(f: Facts, *names, k=None):
    table = {
        "connected": lambda: f.connected,
        "non-homotopic": lambda: f.non_homotopic,
        "simple": lambda: f.simple,
        "filled": lambda: f.filled,
        "quasiplanar": lambda: f.quasiplanar,
        "fan-crossing": lambda: f.fan_crossing,
        "bipartite": lambda: f.bipartite,
        "|V| >= 3": lambda: f.n >= 3,
        "|V| >= 4": lambda: f.n >= 4,
        "|E| >= 1": lambda: len(f.d.paths) >= 1,
        "min degree >= 4": lambda: f.min_degree >= 4,
        "cells have <= 2 distinct vertices": lambda: f.max_distinct <= 2,
        "1-planar": lambda: bool(is_k_planar(f.d, 1)),
        "2-planar": lambda: bool(is_k_planar(f.d, 2)),
        "no TRI3/A4/Q4/W5/P5 cells": lambda: not any(
            f.count(x) for x in (CellKind.TRI3, CellKind.A4, CellKind.Q4, CellKind.W5, CellKind.P5)
        ),
        "k+-real face": lambda: bool(is_k_plus_real_face(f.d, k)),
        "k-bend RAC": lambda: f.rac(k),
    }
    out = {}
    for name in names:
        label = name.replace("k", str(k)) if name in ("k+-real face", "k-bend RAC") else name
        out[label] = bool(table[name]())
    return out


def _lem_4n8(f, params):
    pre = _pre(f, *_BASE, "no TRI3/A4/Q4/W5/P5 cells")
    return pre, [Comparison("|E| <= 4|V| - 8", _F(len(f.d.paths)), _F(4 * f.n - 8), "<=")]


def _a_le_x(f, params):
    pre = _pre(f, "non-homotopic")
    return pre, [Comparison("#A4 <= |X|", _F(f.count(CellKind.A4)), _F(len(f.d.crossings)), "<=")]


def _b_gen(f, params):
    pre = _pre(f, *_BASE)
    a4, q4, tri = f.count(CellKind.A4), f.count(CellKind.Q4), f.count(CellKind.TRI3)
    s_in = f.d.stats.n_inner_segments
    return pre, [
        Comparison("#A4 + 2#Q4 + 3#TRI3 <= |S_in|", _F(a4 + 2 * q4 + 3 * tri), _F(s_in), "<="),
        Comparison("2|C4| + 3|C3| <= |S_in| + #A4", _F(2 * f.c(4) + 3 * f.c(3)), _F(s_in + a4), "<="),
    ]


def _link(f, params):
    pre = _pre(f, *_BASE)
    vertices = [params["v"]] if params.get("v") is not None else list(f.d.vertices)
    parts = []
    if all(pre.values()):
        for v in vertices:
            res = link_of_vertex(f.d, v, check=False)
            parts.append(Comparison(f"|c0({v})| = sum(|c|-5) + |C(v)|", _F(res.c0_size), _F(res.predicted), "="))
    return pre, parts


def _rac_k(f, params):
    k = params.get("k", 1)
    if k not in (1, 2):
        raise ValueError("RAC_K needs k in {1, 2}")
    pre = _pre(f, "connected", "non-homotopic", "k-bend RAC", k=k)
    st = f.d.stats
    lhs = 2 * f.c(3) + f.c(4)
    rhs = st.n_crossings + Fraction(k - 1, 2) * (st.n_crossed_edges + 1)
    return pre, [Comparison("2|C3| + |C4| <= |X| + (k-1)/2 (|E_x| + 1)", _F(lhs), _F(rhs), "<=")]


_FC = ("simple", "connected", "fan-crossing", "|V| >= 3")


def _fc_c4(f, params):
    return _pre(f, *_FC), [Comparison("|C4| <= |X|", _F(f.c(4)), _F(len(f.d.crossings)), "<=")]


def _fc_thm(f, params):
    return _pre(f, *_FC), [
        Comparison("|E| <= 5|V| - 10 - excess", _F(len(f.d.paths)), _F(5 * f.n - 10 - f.excess), "<=")
    ]


def _bip_fc(f, params):
    return _pre(f, *_FC, "bipartite"), [
        Comparison("|V| <= excess", _F(f.n), _F(f.excess), "<="),
        Comparison("|E| <= 4|V| - 10", _F(len(f.d.paths)), _F(4 * f.n - 10), "<="),
    ]


def _qp_nohom(f, params):
    pre = _pre(f, "non-homotopic", "filled", "connected", "|V| >= 3", "cells have <= 2 distinct vertices")
    st = f.d.stats
    rhs = 2 * st.n_crossed_edges - 2 * f.n + 2 * f.excess
    return pre, [Comparison("#A4 <= 2|E_x| - 2|V| + 2 excess", _F(f.count(CellKind.A4)), _F(rhs), "<=")]


def _qp_simple(f, params):
    pre = _pre(f, "filled", "simple", "quasiplanar", "connected", "min degree >= 4")
    st = f.d.stats
    lhs = f.count(CellKind.A4) - st.n_crossed_edges
    rhs = st.n_edges + 2 * f.excess - Fraction(7, 2) * f.n
    return pre, [Comparison("#A4 - |E_x| <= |E| + 2 excess - 3.5|V|", _F(lhs), _F(rhs), "<=")]


def _two_planar(f, params):
    pre = _pre(f, "connected", "non-homotopic", "2-planar")
    lhs = 3 * f.count(CellKind.TRI3) + 2 * f.count(CellKind.Q4) + f.count(CellKind.A4)
    return pre, [Comparison("3#TRI3 + 2#Q4 + #A4 <= |X|", _F(lhs), _F(len(f.d.crossings)), "<=")]


# -- bound table ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoundClass:
    name: str
    variant: str
    min_n: int
    needs_k: bool = False


_CLASSES = {
    "rac": BoundClass("rac", "non-homotopic", 3, True),
    "fan-crossing": BoundClass("fan-crossing", "simple", 3),
    "fan-crossing-bipartite": BoundClass("fan-crossing-bipartite", "simple", 3),
    "quasiplanar-simple": BoundClass("quasiplanar-simple", "simple", 4),
    "quasiplanar": BoundClass("quasiplanar", "non-homotopic", 3),
    "real-face": BoundClass("real-face", "non-homotopic", 3, True),
    "k-planar": BoundClass("k-planar", "non-homotopic", 3, True),
}


def normalize_class(cls: str, variant: str | None = None, k: int | None = None) -> tuple:
    """Map user spellings to ``(canonical class, k)``.

    Accepts e.g. ``"2-planar"``, ``"1-bend RAC"``, ``"k+-real-face"``, ``"3+-real face"``,
    ``"quasiplanar"`` with variant ``"simple"``, ``"fan-crossing"`` with variant ``"bipartite"``.
    """
    s = cls.strip().lower().replace("_", "-").replace("⁺", "+").replace(" ", "-")
    s = s.replace("fan-planar", "fan-crossing")
    v = (variant or "").strip().lower().replace("_", "-").replace(" ", "-")
    if m := re.fullmatch(r"(\d+)-bend-rac", s):
        return "rac", int(m.group(1))
    if s == "rac":
        return "rac", k
    if m := re.fullmatch(r"(\d+|k)\+?-real-face", s):
        return "real-face", k if m.group(1) == "k" else int(m.group(1))
    if s in ("real-face", "k-real-face"):
        return "real-face", k
    if m := re.fullmatch(r"(\d+)-planar", s):
        return "k-planar", int(m.group(1))
    if s == "k-planar":
        return "k-planar", k
    if s in ("quasiplanar", "quasi-planar"):
        if v == "simple":
            return "quasiplanar-simple", None
        if v in ("", "non-homotopic", "nonhomotopic", "general"):
            return "quasiplanar", None
    if s == "quasiplanar-simple":
        return s, None
    if s in ("fan-crossing", "fan-crossing-bipartite"):
        if v == "bipartite" or s.endswith("bipartite"):
            return "fan-crossing-bipartite", None
        if v in ("", "simple"):
            return "fan-crossing", None
    raise UnknownClass(f"unknown class/variant {cls!r}/{variant!r}")


def max_edges(cls: str, variant: str | None = None, n: int = 0, k: int | None = None):
    """Upper bound on |E| from the bound table (an int, or a Fraction for k+-real face)."""
    name, k = normalize_class(cls, variant, k)
    spec = _CLASSES[name]
    if spec.needs_k and k is None:
        raise UnknownClass(f"class {name} needs k")
    if n < spec.min_n:
        raise NTooSmall(f"{name} bound needs n >= {spec.min_n}")
    if name == "rac":
        if k == 0:
            return 4 * n - 8
        if k in (1, 2):
            return k * (5 * n - 10) + (k - 1)
        raise UnknownClass("RAC bounds exist for k in {0, 1, 2}")
    if name == "fan-crossing":
        return 5 * n - 10
    if name == "fan-crossing-bipartite":
        return 4 * n - 10
    if name == "quasiplanar-simple":
        b = Fraction(13, 2) * n - 20
        return int(b) if b.denominator == 1 else b
    if name == "quasiplanar":
        return 8 * n - 20
    if name == "real-face":
        if k == 1:
            return 5 * n - 10
        if k == 2:
            return 4 * n - 8
        if k >= 3:
            b = Fraction(k, k - 2) * (n - 2)
            return int(b) if b.denominator == 1 else b
        raise UnknownClass("k+-real face needs k >= 1")
    if name == "k-planar":
        if k == 1:
            return 4 * n - 8
        if k == 2:
            return 5 * n - 10
        raise UnknownClass("k-planar bounds exist for k in {1, 2}")
    raise UnknownClass(name)


def _bound(f: Facts, params):
    name, k = normalize_class(params.get("class", ""), params.get("variant"), params.get("k"))
    if name == "rac":
        pre = _pre(f, "connected", "|V| >= 3", "k-bend RAC", k=k)
        if k in (1, 2):
            pre.update(_pre(f, "non-homotopic"))
    elif name == "fan-crossing":
        pre = _pre(f, *_FC)
    elif name == "fan-crossing-bipartite":
        pre = _pre(f, *_FC, "bipartite")
    elif name == "quasiplanar-simple":
        pre = _pre(f, "simple", "quasiplanar", "|V| >= 4")
    elif name == "quasiplanar":
        pre = _pre(f, *_BASE, "quasiplanar")
    elif name == "real-face":
        pre = _pre(f, "connected", "|V| >= 3", "k+-real face", k=k)
        if k in (1, 2):
            pre.update(_pre(f, "non-homotopic"))
    else:
        pre = _pre(f, *_BASE, f"{k}-planar") if k in (1, 2) else {"k in {1, 2}": False}
    if f.n < _CLASSES[name].min_n:
        return pre, []
    bound = max_edges(name, None, f.n, k)
    return pre, [Comparison(f"|E| <= bound({name}, k={k})", _F(len(f.d.paths)), _F(bound), "<=")]


_CATALOG = {
    "OBS1": _obs1,
    "LEM_4N8": _lem_4n8,
    "A_LE_X": _a_le_x,
    "B_GEN": _b_gen,
    "LINK": _link,
    "RAC_K": _rac_k,
    "FC_C4": _fc_c4,
    "FC_THM": _fc_thm,
    "BIP_FC": _bip_fc,
    "QP_NOHOM": _qp_nohom,
    "QP_SIMPLE": _qp_simple,
    "TWO_PLANAR": _two_planar,
    "BOUND": _bound,
}

CATALOG_IDS = tuple(_CATALOG)

# every (class, variant, k) the BOUND entry is swept over in catalog runs
BOUND_CASES = (
    {"class": "k-planar", "k": 1},
    {"class": "k-planar", "k": 2},
    {"class": "quasiplanar", "variant": "non-homotopic"},
    {"class": "quasiplanar", "variant": "simple"},
    {"class": "fan-crossing", "variant": "simple"},
    {"class": "fan-crossing", "variant": "bipartite"},
    {"class": "real-face", "k": 1},
    {"class": "real-face", "k": 2},
    {"class": "real-face", "k": 3},
    {"class": "real-face", "k": 4},
    {"class": "real-face", "k": 5},
    {"class": "rac", "k": 0},
    {"class": "rac", "k": 1},
    {"class": "rac", "k": 2},
)


def verify_inequality(d: Drawing, id: str, params: dict | None = None, *, strict: bool = True, facts=None):
    """Evaluate one catalog entry.

    With ``strict`` a failed precondition raises PreconditionFailed; otherwise the
    report comes back with ``applicable == False`` and ``holds is None``.
    ``params`` may carry ``v`` (LINK), ``k`` (RAC_K, BOUND), ``class``/``variant``
    (BOUND) and ``geom`` (the GeomDrawing behind ``d``, for the RAC entries).
    """
    key = id.upper()
    m = re.fullmatch(r"BOUND\((.+)\)", id)
    params = dict(params or {})
    if m:
        key = "BOUND"
        params.setdefault("class", m.group(1))
    if key not in _CATALOG:
        raise KeyError(f"unknown catalog entry {id!r}")
    f = facts or Facts(d, params.get("geom"))
    pre, parts = _CATALOG[key](f, params)
    failed = [name for name, ok in pre.items() if not ok]
    if failed and strict:
        raise PreconditionFailed(f"{id} needs: {', '.join(failed)}", failed)
    if failed:
        return InequalityReport(id, pre, ())
    witness = [p.label for p in parts if not p.holds] or None
    report = InequalityReport(id, pre, tuple(parts), witness, {})
    if key == "BOUND" and report.tight:
        slack = f.slack()
        name, k = normalize_class(params.get("class", ""), params.get("variant"), params.get("k"))
        if name == "real-face" and k and k >= 3:
            slack["cells with |c| != 2k"] = sum(1 for s in f.sizes if s != 2 * k)
        report = InequalityReport(id, pre, tuple(parts), witness, slack)
    return report


def check_catalog(d: Drawing, geom=None, k_rac=None) -> list:
    """Run every catalog entry on ``d``; non-applicable entries are reported, not skipped."""
    f = Facts(d, geom)
    out = []
    for key in CATALOG_IDS:
        if key == "BOUND":
            for case in BOUND_CASES:
                label = f"BOUND({case['class']}" + (
                    f",{case['variant']}" if "variant" in case else f",k={case['k']}"
                ) + ")"
                r = verify_inequality(d, "BOUND", case, strict=False, facts=f)
                out.append(InequalityReport(label, r.preconditions, r.parts, r.witness, r.slack))
        elif key == "RAC_K":
            for k in (1, 2):
                r = verify_inequality(d, key, {"k": k}, strict=False, facts=f)
                out.append(InequalityReport(f"RAC_K(k={k})", r.preconditions, r.parts, r.witness, r.slack))
        else:
            out.append(verify_inequality(d, key, {}, strict=False, facts=f))
    return out
