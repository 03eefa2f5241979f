"""Base predicate class and the TheoremVerdict result type.

Every predicate evaluates one theorem-level statement against a catalog
entry and returns a TheoremVerdict whose justification lists the facts
that fired: recorded catalog data or values computed by the homology
module.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from ..catalog import Catalog, CatalogEntry
from ..const import ANSWER_NO, ANSWER_UNKNOWN, ANSWER_YES
from ..exceptions import ConfigurationError, InternalConsistencyError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TheoremVerdict:
    """Answer of a predicate with the chain of facts behind it."""

    predicate: str
    target: str
    answer: str
    justification: tuple[str, ...] = ()
    parameters: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.answer not in (ANSWER_YES, ANSWER_NO, ANSWER_UNKNOWN):
            raise InternalConsistencyError(f"Invalid answer '{self.answer}'")
        if self.answer != ANSWER_UNKNOWN and not self.justification:
            raise InternalConsistencyError(f"{self.predicate} answered {self.answer} without justification")

    def to_dict(self) -> dict[str, Any]:
        data = {
            "predicate": self.predicate,
            "target": self.target,
            "answer": self.answer,
            "justification": list(self.justification),
            "parameters": dict(self.parameters),
        }
        if self.notes:
            data["notes"] = list(self.notes)
        return data


class BasePredicate:
    """Shared helpers for the catalog predicates.

    Subclasses set ``key`` and implement ``evaluate``.
    """

    key = ""

    def __init__(self, catalog: Catalog) -> None:
        self._catalog = catalog

    @property
    def catalog(self) -> Catalog:
        return self._catalog

    def evaluate(self, target: CatalogEntry, **params: Any) -> TheoremVerdict:
        raise NotImplementedError

    def __call__(self, target: CatalogEntry | str, **params: Any) -> TheoremVerdict:
        if isinstance(target, str):
            target = self._catalog.resolve(target)
        verdict = self.evaluate(target, **params)
        _LOGGER.debug("%s(%s, %s) -> %s", self.key, target.name, params, verdict.answer)
        return verdict

    def _verdict(
        self,
        target: CatalogEntry,
        answer: str,
        facts: list[str],
        notes: tuple[str, ...] = (),
        **params: Any,
    ) -> TheoremVerdict:
        return TheoremVerdict(self.key, target.name, answer, tuple(facts), params, notes)

    def _unknown(self, target: CatalogEntry, reason: str, **params: Any) -> TheoremVerdict:
        _LOGGER.warning("%s on %s is unknown: %s", self.key, target.name, reason)
        return TheoremVerdict(self.key, target.name, ANSWER_UNKNOWN, (reason,), params, target.notes)

    def _applicability(self, target: CatalogEntry) -> str | None:
        """Reason the degree statements do not apply, None if they do."""
        if not target.orientable:
            return f"{target.name} is not orientable"
        if target.dimension < 2:
            return f"{target.name} has dimension {target.dimension} < 2"
        return None

    @staticmethod
    def _check_sobolev_exponent(target: CatalogEntry, p: float, space: str, spaces: tuple[str, ...]) -> None:
        n = target.dimension
        if space not in spaces:
            raise ConfigurationError(f"Unknown Sobolev space '{space}', expected one of {spaces}")
        if not n - 1 <= p < n:
            raise ConfigurationError(f"Exponent p={p} must satisfy {n - 1} <= p < {n} for {target.name}")

