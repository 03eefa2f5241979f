"""Experiment runner: computes the result of one configured subcommand.

The runner parses every descriptor of its ExperimentConfig in ``prepare``
before any computation, then dispatches to one ``_run_*`` method per
subcommand. Each method returns a RunResult holding a JSON document and,
for tabular subcommands, the rows of the output table.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from .catalog import Catalog, load_catalog
from .config import (
    ExperimentConfig,
    parse_family,
    parse_map,
    parse_mesh,
    parse_space,
    parse_young,
)
from .const import (
    ENERGY_CSV_COLUMNS,
    FORMAT_JSON,
    METHOD_PREIMAGE,
    PARADOX_CSV_COLUMNS,
    PREDICATE_DEGREE_SOBOLEV,
    PREDICATE_HOMOTOPY,
    PREDICATE_HOMOTOPY_SOBOLEV,
    VERDICT_DECAYS,
)
from .degree import degree_by_jacobian, degree_by_preimage
from .energy import decay_experiment
from .exceptions import ConfigurationError
from .homology import euler_characteristic, homology, is_rational_homology_sphere
from .map_families import finite_difference_check
from .mesh import export_nodes_csv
from .predicates import PREDICATES
from .young_functions import check_admissible, radial_projection_energy

_LOGGER = logging.getLogger(__name__)

CATALOG_CSV_COLUMNS = ("name", "dimension", "orientable", "betti", "homology", "cover", "sheets", "rhs")
TABULAR_SUBCOMMANDS = ("energy", "paradox", "catalog-list")


@dataclass
class RunResult:
    """Output of one run.

    Attributes:
        document: JSON-ready result
        columns: Table columns for tabular subcommands
        rows: Table rows, one dict per row
    """

    document: dict[str, Any]
    columns: tuple[str, ...] = ()
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def tabular(self) -> bool:
        return bool(self.columns)


class ExperimentRunner:
    """Runs one subcommand of the lab from a validated configuration."""

    def __init__(self, config: ExperimentConfig, catalog: Catalog | None = None) -> None:
        self.config = config
        self._catalog = catalog
        self._parsed: dict[str, Any] = {}

    @property
    def catalog(self) -> Catalog:
        if self._catalog is None:
            self._catalog = load_catalog(self.config.catalog)
        return self._catalog

    def prepare(self) -> dict[str, Any]:
        """Parse every descriptor of the configuration.

        Raises:
            ConfigurationError: Any descriptor does not parse
        """
        config = self.config
        parsed: dict[str, Any] = {}
        if config.young:
            parsed["young"] = parse_young(config.young)
        if config.gauge:
            parsed["gauge"] = parse_young(config.gauge)
        if config.family:
            parsed["family"] = parse_family(config.family)
        if config.map:
            parsed["map"] = parse_map(config.map)
        if config.mesh:
            parsed["mesh"] = parse_mesh(config.mesh)
        if config.space:
            parsed["space"] = parse_space(config.space, self.catalog)
        if config.target:
            parsed["target"] = self.catalog.resolve(config.target)
        if config.subcommand == "degree" and config.method == METHOD_PREIMAGE and config.value is None:
            raise ConfigurationError("The preimage method needs --value")
        self._parsed = parsed
        return parsed

    def run(self) -> RunResult:
        """Compute the configured subcommand."""
        if not self._parsed:
            self.prepare()
        handler = getattr(self, "_run_" + self.config.subcommand.replace("-", "_"))
        _LOGGER.info("Running %s", self.config.subcommand)
        result = handler()
        result.document["config"] = self.config.to_dict()
        return result

    # =========================================================================
    # Young functions
    # =========================================================================

    def _run_young_check(self) -> RunResult:
        P = self._parsed["young"]
        n = self.config.n or 2
        report = check_admissible(P, n)
        radial = radial_projection_energy(P, n)
        return RunResult({
            "young": P.description,
            "n": n,
            "conditions": {verdict.condition: verdict.to_dict() for verdict in report.verdicts},
            "overall": report.overall,
            "radial_projection": radial.to_dict(),
        })

    # =========================================================================
    # Degree
    # =========================================================================

    def _run_degree(self) -> RunResult:
        map_expr = self._parsed["map"]
        mesh = self._parsed["mesh"]
        if self.config.method == METHOD_PREIMAGE:
            estimate = degree_by_preimage(map_expr, self.config.value, mesh)
        else:
            estimate = degree_by_jacobian(map_expr, mesh)
        document = {"map": map_expr.descriptor, "mesh": mesh.descriptor, "degree": estimate.to_dict()}
        if self.config.fd_check:
            check = finite_difference_check(map_expr, mesh, self.config.fd_check, self.config.seed)
            if not check.passed:
                _LOGGER.warning("Finite-difference check of %s exceeds tolerance", map_expr.descriptor)
            document["finite_difference"] = check.to_dict()
        return RunResult(document)

    # =========================================================================
    # Energy
    # =========================================================================

    def _run_energy(self) -> RunResult:
        report = decay_experiment(
            self._parsed["family"], self._parsed["gauge"], self.config.k_list, threads=self.config.threads
        )
        rows = [row.to_dict() for row in report.rows]
        return RunResult(report.to_dict(), ENERGY_CSV_COLUMNS, rows)

    def _run_paradox(self) -> RunResult:
        report = decay_experiment(
            self._parsed["family"],
            self._parsed["gauge"],
            self.config.k_list,
            threads=self.config.threads,
            with_degree=True,
        )
        document = report.to_dict()
        document["energy_decays"] = report.verdict == VERDICT_DECAYS
        document["paradox"] = report.degree_constant and document["energy_decays"]
        if not document["paradox"]:
            _LOGGER.warning(
                "Paradox not exhibited: degree constant=%s, energy verdict=%s", report.degree_constant, report.verdict
            )
        rows = [row.to_dict() for row in report.rows]
        return RunResult(document, PARADOX_CSV_COLUMNS, rows)

    # =========================================================================
    # Homology and catalog
    # =========================================================================

    def _run_homology(self) -> RunResult:
        complex_ = self._parsed["space"]
        groups = homology(complex_, self.config.coefficients)
        document = {
            "space": self.config.space,
            "coefficients": self.config.coefficients,
            "ranks": list(complex_.ranks),
            "groups": [str(group) for group in groups],
            "betti": [group.betti for group in groups],
            "torsion": [list(group.torsion) for group in groups],
            "euler_characteristic": euler_characteristic(complex_)[0],
        }
        if complex_.dimension >= 1 and complex_.ranks[-1] > 0:
            document["rational_homology_sphere"] = is_rational_homology_sphere(complex_)[0]
        return RunResult(document)

    def _predicate_params(self) -> dict[str, Any]:
        config = self.config
        target = self._parsed["target"]
        params: dict[str, Any] = {}
        if config.predicate in (PREDICATE_HOMOTOPY, PREDICATE_HOMOTOPY_SOBOLEV):
            params["n"] = config.n or target.dimension
            params["domain"] = config.domain
        if config.predicate in (PREDICATE_DEGREE_SOBOLEV, PREDICATE_HOMOTOPY_SOBOLEV):
            if config.p is None:
                raise ConfigurationError(f"Predicate '{config.predicate}' needs --p")
            params["p"] = config.p
            params["space"] = config.sobolev_space
        return params

    def _run_verdict(self) -> RunResult:
        predicate = PREDICATES[self.config.predicate](self.catalog)
        verdict = predicate(self._parsed["target"], **self._predicate_params())
        return RunResult(verdict.to_dict())

    def _run_catalog_list(self) -> RunResult:
        rows = []
        for entry in self.catalog.values():
            data = entry.to_dict()
            rows.append({
                "name": entry.name,
                "dimension": entry.dimension,
                "orientable": entry.orientable,
                "betti": " ".join(str(b) for b in entry.betti),
                "homology": data["homology"],
                "cover": data["cover"],
                "sheets": data["sheets"],
                "rhs": entry.is_rhs,
            })
        document = {"entries": [entry.to_dict() for entry in self.catalog.values()]}
        return RunResult(document, CATALOG_CSV_COLUMNS, rows)

    # =========================================================================
    # Meshes
    # =========================================================================

    def _run_mesh_dump(self) -> RunResult:
        mesh = self._parsed["mesh"]
        count = export_nodes_csv(mesh, self.config.out)
        return RunResult({
            "mesh": mesh.descriptor,
            "nodes": count,
            "total_volume": mesh.total_volume,
            "analytic_volume": mesh.analytic_volume,
            "relative_volume_error": abs(mesh.total_volume - mesh.analytic_volume) / mesh.analytic_volume,
            "out": self.config.out,
        })


def wants_table(config: ExperimentConfig) -> bool:
    """Tabular subcommands write CSV unless JSON is requested."""
    return config.subcommand in TABULAR_SUBCOMMANDS and config.format != FORMAT_JSON

