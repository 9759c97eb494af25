"""Exact rational polyhedral kernel: representations, conversions, set operations, LP."""
from .linalg import frac, fvec
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPResult, lp_solve
from .polyhedron import (
    HPoly,
    HRow,
    Polyhedron,
    PolyUnion,
    VPoly,
    contains,
    cone_hull,
    dd_convert,
    describe,
    equals,
    hrow,
    hull_union,
    intersect,
    is_subset,
    minkowski_sum,
    normal_cone,
    polar,
    project,
)

__all__ = [
    "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "LPResult", "lp_solve",
    "HPoly", "HRow", "Polyhedron", "PolyUnion", "VPoly",
    "contains", "cone_hull", "dd_convert", "describe", "equals", "frac", "fvec", "hrow",
    "hull_union", "intersect", "is_subset", "minkowski_sum", "normal_cone", "polar", "project",
]
