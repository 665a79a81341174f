"""Exact determinant bounds for sparse 0/1 matrices, graph Gramians,
path-edge matrices of trees and leaf ranks."""

from .errors import (
    BudgetExceeded,
    DetlabError,
    DimensionError,
    DomainError,
    InvariantViolation,
    NoNonorthogonalPair,
    UnclassifiableRow,
)
from .linalg import BoundValue, det_exact, gram_determinant, hadamard_row_bound, row_gram
from .matrix import ExactMatrix
from .graphs import Graph, gram_det, gram_det_formula, incidence_matrix

__version__ = "0.1.0"

__all__ = [
    "BoundValue",
    "BudgetExceeded",
    "DetlabError",
    "DimensionError",
    "DomainError",
    "ExactMatrix",
    "Graph",
    "InvariantViolation",
    "NoNonorthogonalPair",
    "UnclassifiableRow",
    "det_exact",
    "gram_det",
    "gram_det_formula",
    "gram_determinant",
    "hadamard_row_bound",
    "incidence_matrix",
    "row_gram",
]
