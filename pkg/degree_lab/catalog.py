"""Registry of named manifolds with universal-cover data.

Entries are loaded from ``data/catalog.json`` (or a user file), validated
with voluptuous and frozen. Homotopy group data and the "homeomorphic to
S^4" flags are recorded facts with a source note each; homology is either
computed from a chain complex or recorded as rational Betti numbers.
"""
from __future__ import annotations

import json
import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any

import voluptuous as vol

from .const import (
    CATALOG_FILENAME,
    COVER_NAMED,
    COVER_NONCOMPACT,
    COVER_SELF,
    COVER_TYPES,
    INFINITE_SHEETS,
    PI_STATUSES,
    PI_UNKNOWN,
    PI_ZERO,
)
from .exceptions import ConfigurationError
from .homology import ChainComplex, build_complex, complex_from_json, is_rhs_betti, rational_betti

_LOGGER = logging.getLogger(__name__)

DEFAULT_CATALOG_PATH = Path(__file__).parent / "data" / CATALOG_FILENAME

PI_SCHEMA = vol.Schema(
    {
        vol.Required("status"): vol.In(PI_STATUSES),
        vol.Optional("value"): str,
        vol.Required("source"): str,
    }
)

ENTRY_SCHEMA = vol.Schema(
    {
        vol.Required("name"): vol.All(str, vol.Length(min=1)),
        vol.Optional("title", default=""): str,
        vol.Required("dimension"): vol.All(int, vol.Range(min=1)),
        vol.Required("orientable"): bool,
        vol.Required("homology"): vol.Any(
            {vol.Required("builder"): str, vol.Optional("params", default={}): {str: int}},
            {vol.Required("known"): [vol.All(int, vol.Range(min=0))]},
            {vol.Required("complex"): dict},
        ),
        vol.Required("cover"): {
            vol.Required("kind"): vol.In(COVER_TYPES),
            vol.Optional("entry"): str,
            vol.Optional("description"): str,
            vol.Optional("contractible", default=False): bool,
        },
        vol.Required("sheets"): vol.Any(vol.All(int, vol.Range(min=1)), INFINITE_SHEETS),
        vol.Optional("pi", default={}): {vol.Match(r"^\d+$"): PI_SCHEMA},
        vol.Optional("pi_from_cover", default=False): bool,
        vol.Optional("aliases", default=[]): [str],
        vol.Optional("homeomorphic_to_s4", default=False): bool,
        vol.Optional("notes", default=[]): [str],
    }
)

CATALOG_SCHEMA = vol.Schema(
    {
        vol.Optional("version", default=1): int,
        vol.Required("entries"): [dict],
    }
)


@dataclass(frozen=True)
class PiDatum:
    """pi_n of an entry: zero, nonzero (with its value) or unknown."""

    status: str
    source: str
    value: str | None = None

    @property
    def is_zero(self) -> bool:
        return self.status == PI_ZERO

    def describe(self, n: int, name: str) -> str:
        shown = f" = {self.value}" if self.value else ""
        return f"pi_{n}({name}) is {self.status}{shown} [{self.source}]"


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A named manifold.

    Attributes:
        name: Catalog key
        dimension: n
        orientable: Orientability flag
        complex: Chain complex when the homology is computed
        known_betti: Recorded rational Betti numbers when no complex exists
        cover: One of "self", "named", "noncompact"
        cover_entry: Name of the covering entry for "named"
        cover_description: Text for a noncompact cover
        cover_contractible: The noncompact cover is contractible
        sheets: gamma, None when infinite
        pi: Recorded homotopy groups by n
        pi_from_cover: pi_n for n >= 2 equals that of the universal cover
    """

    name: str
    dimension: int
    orientable: bool
    cover: str
    sheets: int | None
    complex: ChainComplex | None = None
    known_betti: tuple[int, ...] | None = None
    title: str = ""
    homology_source: str = ""
    cover_entry: str | None = None
    cover_description: str = ""
    cover_contractible: bool = False
    pi: Mapping[int, PiDatum] = field(default_factory=dict)
    pi_from_cover: bool = False
    aliases: tuple[str, ...] = ()
    homeomorphic_to_s4: bool = False
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.cover == COVER_SELF and self.sheets != 1:
            raise ConfigurationError(f"Entry '{self.name}' is its own universal cover, so gamma must be 1")
        if self.cover == COVER_NONCOMPACT and self.sheets is not None:
            raise ConfigurationError(f"Entry '{self.name}' has a noncompact cover, so gamma must be infinite")
        if self.cover == COVER_NAMED and (not self.cover_entry or self.sheets is None):
            raise ConfigurationError(f"Entry '{self.name}' needs a cover entry and a finite gamma")
        if (self.complex is None) == (self.known_betti is None):
            raise ConfigurationError(f"Entry '{self.name}' needs exactly one homology source")
        if self.complex is not None and self.complex.dimension != self.dimension:
            raise ConfigurationError(
                f"Entry '{self.name}' has dimension {self.dimension} but its complex has "
                f"dimension {self.complex.dimension}"
            )
        if self.known_betti is not None and len(self.known_betti) != self.dimension + 1:
            raise ConfigurationError(f"Entry '{self.name}' needs {self.dimension + 1} Betti numbers")

    @property
    def betti(self) -> tuple[int, ...]:
        """Rational Betti numbers, computed when a complex exists."""
        if self.complex is not None:
            return rational_betti(self.complex)
        return self.known_betti

    @property
    def betti_computed(self) -> bool:
        return self.complex is not None

    @property
    def is_rhs(self) -> bool:
        return is_rhs_betti(self.betti)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def describe_homology(self) -> str:
        how = f"computed from {self.homology_source}" if self.betti_computed else "recorded"
        return f"rational Betti numbers of {self.name} are {self.betti} ({how})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "title": self.title,
            "dimension": self.dimension,
            "orientable": self.orientable,
            "betti": list(self.betti),
            "homology": "computed" if self.betti_computed else "known",
            "cover": self.cover_entry if self.cover == COVER_NAMED else (
                self.name if self.cover == COVER_SELF else self.cover_description
            ),
            "sheets": INFINITE_SHEETS if self.sheets is None else self.sheets,
            "aliases": list(self.aliases),
        }


def entry_from_json(data: dict[str, Any]) -> CatalogEntry:
    """Validate one JSON entry and build the frozen entry."""
    try:
        data = ENTRY_SCHEMA(data)
    except vol.Invalid as err:
        raise ConfigurationError(f"Invalid catalog entry {data.get('name', '?')!r}: {err}") from err
    homology_data = data["homology"]
    complex_ = None
    known = None
    source = ""
    if "builder" in homology_data:
        complex_ = build_complex(homology_data["builder"], **homology_data["params"])
        params = ", ".join(f"{key}={value}" for key, value in sorted(homology_data["params"].items()))
        source = f"the {homology_data['builder']}({params}) cell structure"
    elif "complex" in homology_data:
        complex_ = complex_from_json(homology_data["complex"])
        source = "the supplied chain complex"
    else:
        known = tuple(homology_data["known"])
    cover = data["cover"]
    return CatalogEntry(
        name=data["name"],
        title=data["title"],
        dimension=data["dimension"],
        orientable=data["orientable"],
        complex=complex_,
        known_betti=known,
        homology_source=source,
        cover=cover["kind"],
        cover_entry=cover.get("entry"),
        cover_description=cover.get("description", ""),
        cover_contractible=cover["contractible"],
        sheets=None if data["sheets"] == INFINITE_SHEETS else data["sheets"],
        pi=MappingProxyType(
            {int(n): PiDatum(item["status"], item["source"], item.get("value")) for n, item in data["pi"].items()}
        ),
        pi_from_cover=data["pi_from_cover"],
        aliases=tuple(data["aliases"]),
        homeomorphic_to_s4=data["homeomorphic_to_s4"],
        notes=tuple(data["notes"]),
    )


class Catalog(Mapping[str, CatalogEntry]):
    """Immutable name -> entry mapping with alias lookup."""

    def __init__(self, entries: list[CatalogEntry]) -> None:
        by_name: dict[str, CatalogEntry] = {}
        aliases: dict[str, str] = {}
        for entry in entries:
            if entry.name in by_name:
                raise ConfigurationError(f"Duplicate catalog entry '{entry.name}'")
            by_name[entry.name] = entry
            for alias in entry.aliases:
                aliases[alias.lower()] = entry.name
        for entry in entries:
            if entry.cover == COVER_NAMED and entry.cover_entry not in by_name:
                raise ConfigurationError(f"Entry '{entry.name}' names unknown cover '{entry.cover_entry}'")
        self._entries = MappingProxyType(by_name)
        self._aliases = MappingProxyType(aliases)

    def __getitem__(self, name: str) -> CatalogEntry:
        key = name.strip()
        if key in self._entries:
            return self._entries[key]
        return self._entries[self._aliases[key.lower()]]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: object) -> bool:
        try:
            self[name]  # type: ignore[index]
        except (KeyError, AttributeError):
            return False
        return True

    def resolve(self, name: str) -> CatalogEntry:
        """Look up by name or alias.

        Raises:
            ConfigurationError: Unknown name
        """
        try:
            return self[name]
        except KeyError as err:
            raise ConfigurationError(f"Unknown catalog target '{name}'") from err

    def cover_of(self, entry: CatalogEntry) -> CatalogEntry | None:
        """The compact universal cover, None for a noncompact one."""
        if entry.cover == COVER_SELF:
            return entry
        if entry.cover == COVER_NAMED:
            return self._entries[entry.cover_entry]
        return None

    def cover_is_rhs(self, entry: CatalogEntry) -> tuple[bool, list[str]]:
        """Whether the universal cover is a rational homology sphere, with the facts used."""
        if entry.cover == COVER_NONCOMPACT:
            return False, [
                f"universal cover of {entry.name} is {entry.cover_description or 'noncompact'}",
                "a noncompact manifold has vanishing top rational cohomology, so it is not a "
                "rational homology sphere",
            ]
        cover = self.cover_of(entry)
        if cover is entry:
            facts = [f"{entry.name} is its own universal cover"]
        else:
            facts = [f"universal cover of {entry.name} is {cover.name} with {entry.sheets} sheets"]
        facts.append(cover.describe_homology())
        rhs = cover.is_rhs
        facts.append(f"{cover.name} {'is' if rhs else 'is not'} a rational homology sphere")
        return rhs, facts

    def pi(self, entry: CatalogEntry, n: int) -> PiDatum:
        """pi_n of an entry; higher groups may come from the universal cover."""
        if n in entry.pi:
            return entry.pi[n]
        if n >= 2 and entry.pi_from_cover:
            if entry.cover == COVER_NONCOMPACT and entry.cover_contractible:
                return PiDatum(PI_ZERO, f"the universal cover {entry.cover_description} is contractible", "0")
            cover = self.cover_of(entry)
            if cover is not None and cover is not entry:
                datum = self.pi(cover, n)
                return PiDatum(datum.status, f"covering isomorphism with {cover.name}; {datum.source}", datum.value)
        return PiDatum(PI_UNKNOWN, "not recorded in the catalog")


def validate_catalog(catalog: Catalog) -> list[str]:
    """Covering-space data checks over the orientable entries.

    - an entry whose universal cover is a rational homology sphere is one too
    - no even-dimensional entry covered with gamma > 1 by a rational homology sphere
    - chi(cover) = gamma * chi(entry) for finite covers

    Returns:
        Violations, empty when the catalog is consistent
    """
    problems = []
    for entry in catalog.values():
        if not entry.orientable:
            continue
        cover = catalog.cover_of(entry)
        if cover is None:
            continue
        if cover.is_rhs and not entry.is_rhs:
            problems.append(f"{entry.name}: cover {cover.name} is a rational homology sphere but the entry is not")
        if cover.is_rhs and entry.dimension % 2 == 0 and entry.sheets > 1:
            problems.append(f"{entry.name}: even dimension with a {entry.sheets}-sheeted rational homology sphere cover")
        if cover.euler_characteristic != entry.sheets * entry.euler_characteristic:
            problems.append(
                f"{entry.name}: chi(cover) = {cover.euler_characteristic} but gamma * chi = "
                f"{entry.sheets * entry.euler_characteristic}"
            )
    return problems


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and validate a catalog document.

    Raises:
        ConfigurationError: Unreadable or invalid document, or failed data checks
    """
    path = Path(path) if path is not None else DEFAULT_CATALOG_PATH
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        document = CATALOG_SCHEMA(document)
    except (OSError, json.JSONDecodeError, vol.Invalid) as err:
        raise ConfigurationError(f"Cannot load catalog '{path}': {err}") from err
    catalog = Catalog([entry_from_json(item) for item in document["entries"]])
    problems = validate_catalog(catalog)
    if problems:
        raise ConfigurationError(f"Catalog '{path}' fails its data checks: {'; '.join(problems)}")
    _LOGGER.debug("Loaded %d catalog entries from %s", len(catalog), path)
    return catalog
