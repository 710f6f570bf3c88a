"""Exact verification of transposed Poisson structures on solvable Lie algebras
with naturally graded filiform nilradical."""

from .algebra import AlgebraTable, is_lie, transport
from .catalog import FamilySpec, TPSpec, make_algebra, make_tp_product
from .derivations import delta_derivation_space
from .tpa import associativity_constraints, case_split_solve, tpa_linear_space, verify_tpa

__version__ = "0.1.0"

__all__ = [
    "AlgebraTable",
    "FamilySpec",
    "TPSpec",
    "associativity_constraints",
    "case_split_solve",
    "delta_derivation_space",
    "is_lie",
    "make_algebra",
    "make_tp_product",
    "tpa_linear_space",
    "transport",
    "verify_tpa",
    "__version__",
]
