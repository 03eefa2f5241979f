"""Four-dimensional specialization of the degree predicate."""
from __future__ import annotations

import logging
from typing import Any

from ..catalog import CatalogEntry
from ..const import ANSWER_NO, ANSWER_YES, PREDICATE_DEGREE_DIM4
from ..exceptions import InternalConsistencyError
from .base import BasePredicate, TheoremVerdict
from .degree import DegreeWellDefined

_LOGGER = logging.getLogger(__name__)


class DegreeWellDefinedDim4(BasePredicate):
    """No iff the four-dimensional target is homeomorphic to S^4.

    The answer is checked against DegreeWellDefined on every call.
    """

    key = PREDICATE_DEGREE_DIM4

    def evaluate(self, target: CatalogEntry, **params: Any) -> TheoremVerdict:
        if target.dimension != 4:
            return self._unknown(target, f"{target.name} has dimension {target.dimension}, not 4")
        reason = self._applicability(target)
        if reason:
            return self._unknown(target, reason)
        if target.homeomorphic_to_s4:
            answer = ANSWER_NO
            facts = [f"{target.name} is recorded as homeomorphic to S^4"]
        else:
            answer = ANSWER_YES
            facts = [f"{target.name} is not recorded as homeomorphic to S^4"]

        general = DegreeWellDefined(self._catalog).evaluate(target)
        if general.answer != answer:
            raise InternalConsistencyError(
                f"Four-dimensional predicate says {answer} for {target.name}, general predicate says {general.answer}"
            )
        facts.extend(general.justification)
        return self._verdict(target, answer, facts)
