"""Graphs of linear codes with prescribed dual distance.

Vertices are [n, k] codes over GF(q) whose dual minimum distance is at least
t + 1.  Δ_t joins codes meeting in a hyperplane; Λ_t additionally asks that
hyperplane to have the same dual-distance property.  The package enumerates
these graphs at small parameters and checks their connectivity structure.
"""

from .codes import LinearCode, dual_min_distance, from_matrix, in_class, subcode_by_kernel
from .errors import BudgetExceeded
from .gf import FieldSpec, field_of_order, make_field
from .graphs import CodeGraph, GraphKind, build_graph
from .grassmann import enumerate_class, enumerate_subspaces, gaussian_binomial, pencil, plucker
from .matgf import MatGF
from .saturation import ProjPointSet, is_isolated, min_saturating_size, secant_span
from .symmetry import MonomialMap, act, generators, orbit

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CodeGraph",
    "FieldSpec",
    "GraphKind",
    "LinearCode",
    "MatGF",
    "MonomialMap",
    "ProjPointSet",
    "act",
    "build_graph",
    "dual_min_distance",
    "enumerate_class",
    "enumerate_subspaces",
    "field_of_order",
    "from_matrix",
    "gaussian_binomial",
    "generators",
    "in_class",
    "is_isolated",
    "make_field",
    "min_saturating_size",
    "orbit",
    "pencil",
    "plucker",
    "secant_span",
    "subcode_by_kernel",
]
