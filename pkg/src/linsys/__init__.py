"""Linear systems, lattice segment systems, and their transversal and 2-packing numbers."""

from .core import (
    LinearSystem,
    are_isomorphic,
    degrees,
    is_intersecting,
    is_nu2_isomorphic,
    prune_low_degree,
    remove_line,
    uniformity,
    validate,
)
from .solvers import BudgetExceeded, transversal_number, two_packing_number

__all__ = [
    "BudgetExceeded",
    "LinearSystem",
    "are_isomorphic",
    "degrees",
    "is_intersecting",
    "is_nu2_isomorphic",
    "prune_low_degree",
    "remove_line",
    "transversal_number",
    "two_packing_number",
    "uniformity",
    "validate",
]

__version__ = "0.1.0"
