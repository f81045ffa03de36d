"""polyco: linear co-design problems as polyhedra.

Compose monotone linear design problems into system-level feasible sets,
answer Pareto queries exactly as multi-objective LPs, and approximate convex
components by tangent-cut outer polyhedra.
"""
from ._backend import BACKEND
from .errors import (
    ConvexityViolated,
    CoordinateError,
    DimensionCapExceeded,
    DimensionMismatch,
    EmptyFeasible,
    EmptyPolyhedron,
    MalformedGraph,
    NotMonotone,
    NumericInstability,
    OracleInconsistent,
    PointBeyondReference,
    UnboundedObjective,
)
from .lp import LpResult, LpStatus, lexmin, solve_lp
from .polyhedron import (
    Cone,
    Coord,
    Polyhedron,
    VRep,
    add_equalities,
    contains,
    fme_eliminate,
    is_empty,
    product,
    project,
    recession_cone,
    remove_redundancy,
    stack,
)
from .vertex import enumerate_vertices
from .molp import MolpProblem, UpperImage, dominance_filter, solve_molp
from .ldp import (
    Ldp,
    Port,
    check_monotone,
    new_ldp,
    query_max_functionalities,
    query_min_resources,
    require_monotone,
)
from .lcdp import (
    Edge,
    LcdpGraph,
    build_monolithic,
    classify_edges,
    compose_compositional,
    feedback_close,
    query_monolithic,
    series_contract,
)
from .convex import (
    ApproxReport,
    ConvexConstraint,
    excess,
    inflate,
    outer_ldp,
    refine_resource_space,
    tangent_cut,
    truncated_hausdorff_cones,
    verify_recession_orthant,
)

__version__ = "0.1.0"
