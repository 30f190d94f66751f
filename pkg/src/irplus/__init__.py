"""Positive inductive-recursive codes over finite categories.

The package interprets codes as endofunctors on families, builds initial
chains and folds out of them, and compiles nested datatypes to containers.
"""

__version__ = "0.1.0"

from .category import (  # noqa: E402
    Fn,
    core_groupoid,
    discrete_category,
    discretisation,
    finset_category,
    opposite,
)
from .codes import Delta, Iota, Sigma, compose_plus, id_plus  # noqa: E402
from .fam import FamMorphism, FamObject  # noqa: E402
from .semantics import BudgetExceeded, interpret_mor, interpret_obj  # noqa: E402

__all__ = [
    "BudgetExceeded",
    "Delta",
    "FamMorphism",
    "FamObject",
    "Fn",
    "Iota",
    "Sigma",
    "compose_plus",
    "core_groupoid",
    "discrete_category",
    "discretisation",
    "finset_category",
    "id_plus",
    "interpret_mor",
    "interpret_obj",
    "opposite",
]
