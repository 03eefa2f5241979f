"""Homotopy-class definability predicates."""
from __future__ import annotations

import logging
from typing import Any

from ..catalog import CatalogEntry
from ..const import (
    ANSWER_NO,
    ANSWER_YES,
    PI_NONZERO,
    PREDICATE_HOMOTOPY,
    PREDICATE_HOMOTOPY_SOBOLEV,
    SOBOLEV_SPACES,
    SPACE_H,
)
from ..exceptions import ConfigurationError
from .base import BasePredicate, TheoremVerdict

_LOGGER = logging.getLogger(__name__)


class HomotopyClassesDefined(BasePredicate):
    """Homotopy classes of maps from an n-manifold into the target.

    Yes when pi_n(N) = 0. No when pi_n(N) != 0 and the domain is S^n.
    Unknown otherwise: pi_n = 0 is sufficient but not necessary.
    """

    key = PREDICATE_HOMOTOPY

    def _domain_name(self, n: int, domain: str | None) -> str:
        if domain is None:
            return f"S^{n}"
        entry = self._catalog.resolve(domain)
        if entry.dimension != n:
            raise ConfigurationError(f"Domain {entry.name} has dimension {entry.dimension}, expected {n}")
        return entry.name

    def _domain_is_sphere(self, n: int, domain: str | None) -> bool:
        if domain is None:
            return True
        entry = self._catalog.resolve(domain)
        sphere = self._catalog.get(f"s{n}")
        return entry is sphere

    def evaluate(self, target: CatalogEntry, n: int = 0, domain: str | None = None, **params: Any) -> TheoremVerdict:
        if n < 1:
            raise ConfigurationError(f"Domain dimension must be >= 1, got {n}")
        domain_name = self._domain_name(n, domain)
        datum = self._catalog.pi(target, n)
        facts = [datum.describe(n, target.name)]
        if datum.is_zero:
            facts.append(f"pi_{n} = 0 makes homotopy classes of maps {domain_name} -> {target.name} well defined")
            return self._verdict(target, ANSWER_YES, facts, n=n, domain=domain_name)
        if datum.status == PI_NONZERO and self._domain_is_sphere(n, domain):
            facts.append(f"pi_{n} != 0 yields a sequence from {domain_name} leaving a homotopy class in the limit")
            return self._verdict(target, ANSWER_NO, facts, n=n, domain=domain_name)
        if datum.status == PI_NONZERO:
            reason = f"pi_{n}({target.name}) != 0 but the domain {domain_name} is not S^{n}"
        else:
            reason = f"pi_{n}({target.name}) is not recorded"
        return self._unknown(target, reason, n=n, domain=domain_name)


class HomotopyClassesDefinedSobolev(BasePredicate):
    """W^{1,p} and H^{1,p} counterpart.

    In H^{1,p} the answer is that of HomotopyClassesDefined. In W^{1,p} a
    Yes needs pi_{n-1}(N) = pi_n(N) = 0.
    """

    key = PREDICATE_HOMOTOPY_SOBOLEV

    def evaluate(
        self,
        target: CatalogEntry,
        n: int = 0,
        p: float = 0.0,
        space: str = SPACE_H,
        domain: str | None = None,
        **params: Any,
    ) -> TheoremVerdict:
        if space not in SOBOLEV_SPACES:
            raise ConfigurationError(f"Unknown Sobolev space '{space}', expected one of {SOBOLEV_SPACES}")
        if not n - 1 <= p < n:
            raise ConfigurationError(f"Exponent p={p} must satisfy {n - 1} <= p < {n}")
        base = HomotopyClassesDefined(self._catalog).evaluate(target, n=n, domain=domain)
        facts = list(base.justification)
        if space == SPACE_H or base.answer != ANSWER_YES:
            return TheoremVerdict(self.key, target.name, base.answer, tuple(facts),
                                  {**base.parameters, "p": p, "space": space}, base.notes)
        lower = self._catalog.pi(target, n - 1)
        facts.append(lower.describe(n - 1, target.name))
        if lower.is_zero:
            return self._verdict(target, ANSWER_YES, facts, n=n, p=p, space=space, domain=base.parameters["domain"])
        return self._unknown(
            target, f"pi_{n - 1}({target.name}) is not known to vanish", n=n, p=p, space=space,
            domain=base.parameters["domain"],
        )
