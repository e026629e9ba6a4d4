"""Toolkit for topological drawings of graphs and their edge-density counting."""
from .classes import (
    ClassReport,
    class_report,
    crossing_graph,
    crossings_per_edge,
    is_fan_crossing,
    is_k_planar,
    is_k_plus_real_face,
    is_quasiplanar,
    real_face_level,
)
from .density import (
    BOUND_CASES,
    CATALOG_IDS,
    DensityEvaluation,
    InequalityReport,
    check_catalog,
    density_formula,
    max_edges,
    verify_inequality,
)
from .drawing import (
    PLANE,
    SPHERE,
    Cell,
    CellKind,
    Drawing,
    build_drawing,
    classify,
    enumerate_cells,
    link_is_regular,
    link_of_vertex,
    planarize,
)
from .errors import *  # noqa: F401,F403
from .formats import dump_drw, dump_geo, load, parse_drw, parse_geo
from .generators import (
    eliminate_t_cells,
    fill,
    fill_simple,
    gen_one_planar_tight,
    gen_quasiplanar_nonhomotopic,
    gen_quasiplanar_simple,
    insert_uncrossed_edge,
)
from .geometry import (
    GeomDrawing,
    compute_arrangement,
    convex_bend_corners,
    geometric_cells,
    is_rac,
    random_geom_drawing,
    to_combinatorial,
)
from .properties import (
    bipartition,
    find_empty_lenses,
    is_filled,
    is_non_homotopic,
    is_simple,
    lenses,
    max_distinct_vertices_per_cell,
)

__version__ = "0.1.0"
