"""Exact computations for principal and virtual subspaces of level-k twisted A2 modules."""

from .algebra import Element, Mode, NormalMonomial, Root, bracket, normal_order, psi, tau, x1, x12
from .engine import CacheCorruption, DimCache, dim_table, quotient_dim, rank
from .exact import QuarterInt, Scalar
from .graded import Bidegree, Box, DimTable, TruncationError, default_box, enumerate_monomials
from .presentation import (Convention, ExtraForm, IdealSpec, RelationId, Weighting, extra_generators,
                           ideal_span_in_bidegree, member_of_ideal, r0_generator)

__all__ = [
    "Element", "Mode", "NormalMonomial", "Root", "bracket", "normal_order", "psi", "tau", "x1", "x12",
    "CacheCorruption", "DimCache", "dim_table", "quotient_dim", "rank", "QuarterInt", "Scalar",
    "Bidegree", "Box", "DimTable", "TruncationError", "default_box", "enumerate_monomials",
    "Convention", "ExtraForm", "IdealSpec", "RelationId", "Weighting", "extra_generators",
    "ideal_span_in_bidegree", "member_of_ideal", "r0_generator",
]
