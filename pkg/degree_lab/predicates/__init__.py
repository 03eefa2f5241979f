"""Theorem predicates evaluated over the manifold catalog.

- DegreeWellDefined: degree in the critical space
- DegreeWellDefinedDim4: the four-dimensional specialization
- HomotopyClassesDefined: homotopy classes via pi_n
- DegreeWellDefinedSobolev / HomotopyClassesDefinedSobolev: the
  W^{1,p} and H^{1,p} counterparts for n-1 <= p < n

Each class inherits from BasePredicate and returns a TheoremVerdict.
"""
from ..const import (
    PREDICATE_DEGREE,
    PREDICATE_DEGREE_DIM4,
    PREDICATE_DEGREE_SOBOLEV,
    PREDICATE_HOMOTOPY,
    PREDICATE_HOMOTOPY_SOBOLEV,
)
from .base import BasePredicate, TheoremVerdict
from .degree import DegreeWellDefined, DegreeWellDefinedSobolev
from .dim4 import DegreeWellDefinedDim4
from .homotopy import HomotopyClassesDefined, HomotopyClassesDefinedSobolev

PREDICATES: dict[str, type[BasePredicate]] = {
    PREDICATE_DEGREE: DegreeWellDefined,
    PREDICATE_DEGREE_DIM4: DegreeWellDefinedDim4,
    PREDICATE_HOMOTOPY: HomotopyClassesDefined,
    PREDICATE_DEGREE_SOBOLEV: DegreeWellDefinedSobolev,
    PREDICATE_HOMOTOPY_SOBOLEV: HomotopyClassesDefinedSobolev,
}

__all__ = [
    "BasePredicate",
    "TheoremVerdict",
    "DegreeWellDefined",
    "DegreeWellDefinedDim4",
    "DegreeWellDefinedSobolev",
    "HomotopyClassesDefined",
    "HomotopyClassesDefinedSobolev",
    "PREDICATES",
]
