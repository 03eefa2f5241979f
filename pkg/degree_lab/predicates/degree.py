"""Degree well-definedness predicates.

The degree of maps into N is well defined in the critical Orlicz-Sobolev
space if and only if the universal cover of N is not a rational homology
sphere. The Sobolev variant covers n-1 <= p < n.
"""
from __future__ import annotations

import logging
from typing import Any

from ..catalog import CatalogEntry
from ..const import (
    ANSWER_NO,
    ANSWER_YES,
    PREDICATE_DEGREE,
    PREDICATE_DEGREE_SOBOLEV,
    SOBOLEV_SPACES,
    SPACE_H,
)
from .base import BasePredicate, TheoremVerdict

_LOGGER = logging.getLogger(__name__)


class DegreeWellDefined(BasePredicate):
    """Yes iff the universal cover of the target is not a rational homology sphere."""

    key = PREDICATE_DEGREE

    def evaluate(self, target: CatalogEntry, **params: Any) -> TheoremVerdict:
        reason = self._applicability(target)
        if reason:
            return self._unknown(target, reason)
        rhs, facts = self._catalog.cover_is_rhs(target)
        if rhs:
            facts.append("a target covered by a rational homology sphere admits maps of nonzero degree "
                         "converging to a constant")
        else:
            facts.append("the degree is continuous along converging sequences")
        return self._verdict(target, ANSWER_NO if rhs else ANSWER_YES, facts)


class DegreeWellDefinedSobolev(BasePredicate):
    """W^{1,p} and H^{1,p} counterpart for n-1 <= p < n.

    In H^{1,p} the criterion is the one of DegreeWellDefined. In W^{1,p} a
    Yes additionally needs pi_{n-1}(N) = 0; otherwise the answer is Unknown.
    """

    key = PREDICATE_DEGREE_SOBOLEV

    def evaluate(self, target: CatalogEntry, p: float = 0.0, space: str = SPACE_H, **params: Any) -> TheoremVerdict:
        reason = self._applicability(target)
        if reason:
            return self._unknown(target, reason, p=p, space=space)
        self._check_sobolev_exponent(target, p, space, SOBOLEV_SPACES)
        base = DegreeWellDefined(self._catalog).evaluate(target)
        facts = list(base.justification)
        if space == SPACE_H or base.answer == ANSWER_NO:
            if base.answer == ANSWER_NO and space != SPACE_H:
                facts.append("the smooth counterexample sequence also lies in W^{1,p}")
            return self._verdict(target, base.answer, facts, p=p, space=space)

        n = target.dimension
        datum = self._catalog.pi(target, n - 1)
        facts.append(datum.describe(n - 1, target.name))
        if datum.is_zero:
            facts.append(f"pi_{n - 1} = 0 makes W^{{1,p}} maps approximable by smooth ones")
            return self._verdict(target, ANSWER_YES, facts, p=p, space=space)
        return self._unknown(
            target, f"pi_{n - 1}({target.name}) is not known to vanish; W^{{1,p}} maps may not be approximable",
            p=p, space=space,
        )
