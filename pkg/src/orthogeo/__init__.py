"""Exact distances and unique geodesics in orthoscheme complexes of graded
posets: rooted cube complexes of graphs, median complexes of posets with
inconsistent pairs, and modular semilattices given explicitly."""

from .arch import Arch, arch_from_xi, concave_subarch, extreme_arch, is_concave, v_sq, v_value, xi
from .engine import Geodesic, geodesic, geodesic_median, geodesic_modular_lattice, owen_path
from .errors import (
    ChainNotMaximal,
    CycleError,
    EmptyBlock,
    InfiniteFlow,
    InvalidPoint,
    InvalidStructure,
    JoinUndefined,
    NotBipartitePip,
    NotCommonSimplex,
    NotConcave,
    NotGraded,
    NotMedian,
    NotModular,
    NotModularSemilattice,
    NotOrthogonal,
    OrthogeoError,
    SizeCap,
    SupportMismatch,
    SupportOutsideFrame,
    UnknownElement,
)
from .flow import FlowNetwork, FlowResult, dimacs_dump, max_flow, solve_msip
from .frames import (
    Frame,
    birkhoff_projection,
    build_frame,
    distributive_frame,
    distributive_sublattice,
)
from .oracle import cat0_check, enumerate_arches, modular_lattice_catalog, oracle_distance
from .points import (
    BPolyPath,
    Point,
    PolyPath,
    as_fraction,
    b_coordinates,
    check_b_point,
    check_point,
    convex_combo,
    level_decomposition,
    path_length,
    point_from_b,
    point_join,
    point_meet,
    simplex_distance,
    sq_simplex_distance,
    tau,
)
from .poset import (
    BirkhoffResult,
    GradedPoset,
    MetricInterval,
    Pip,
    birkhoff,
    boolean_gated_sets,
    classify,
    dedup_chain,
    extend_to_maximal_chain,
    ideal_name,
    is_maximal_chain,
    load_poset,
    metric_interval,
    omega,
    parse_ideal_name,
    query,
    size_cap,
    stable_ideals,
)
from .radicals import (
    SqrtSum,
    convex_hull,
    cross,
    frac_sqrt,
    sqrt_reduce,
    squarefree_split,
    upper_right_chain,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
