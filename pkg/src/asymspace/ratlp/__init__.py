"""Exact rational linear algebra and linear programming kernel."""
from ._backend import ENV_FLAG, available_backends, get_backend
from .hull import HullMembership, extreme_points, hull_membership, is_bounded, polytope_vertices, separation_gap
from .linalg import (
    DimensionError,
    Rat,
    Vec,
    add,
    as_vec,
    dot,
    fmt,
    lincomb,
    matvec,
    neg,
    nullspace,
    rank,
    scale,
    solve_linear,
    sub,
    to_rat,
    unit,
    zeros,
)
from .simplex import (
    FEASIBILITY,
    INFEASIBLE,
    MAXIMIZE,
    MINIMIZE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPOutcome,
    SolverError,
    feasible,
    maximize,
    minimize,
    solve,
    verify_farkas,
    verify_outcome,
)
