"""Sobolev p-energies, Orlicz energies and decay experiments along map families.

An experiment runs one map family over a list of orders k, records per row
the energy, the cap measure, sup |Df|, the one-line upper bound
certificate, the Luxemburg norm of |Df| and the reference value P(k) k^-n,
then fits the log-log slope and classifies the decay.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .const import (
    BOUNDED_SLOPE_MAX,
    BOUNDED_SPREAD_MAX,
    CERTIFICATE_SLACK,
    DECAY_END_RATIO,
    DECAY_SLOPE_MAX,
    MIN_K_VALUES,
    REFERENCE_BAND_MAX,
    VERDICT_BOUNDED,
    VERDICT_DECAYS,
    VERDICT_INCONCLUSIVE,
)
from .degree import DegreeEstimate, degree_by_jacobian
from .exceptions import ConfigurationError, ResolutionError
from .map_families import MapExpr, check_resolution, differential
from .mesh import ManifoldMesh, polar_cap_measure
from .young_functions import (
    Power,
    WeightedField,
    YoungFunction,
    check_small_o,
    eval_young,
    luxemburg_norm,
    orlicz_mean,
)

_LOGGER = logging.getLogger(__name__)


# =============================================================================
# Energies of a single map
# =============================================================================

def orlicz_energy(map_expr: MapExpr, mesh: ManifoldMesh, P: YoungFunction) -> float:
    """Integral of P(|Df|) over the domain mesh.

    Raises:
        ResolutionError: If the mesh violates the resolution rule
    """
    sample = differential(map_expr, mesh.coords)
    check_resolution(map_expr, mesh, sample)
    return orlicz_mean(WeightedField(sample.hs_norm, mesh.weights), P)


def p_energy(map_expr: MapExpr, mesh: ManifoldMesh, p: float) -> float:
    """Integral of |Df|^p; the same sum as the Orlicz energy of Power(p)."""
    return orlicz_energy(map_expr, mesh, Power(p))


# =============================================================================
# Experiments
# =============================================================================

@dataclass(frozen=True)
class ExperimentFamily:
    """A map family indexed by k, with its mesh rule.

    Attributes:
        name: Family key
        dimension: Dimension n of domain and target
        build: k -> (map, domain mesh satisfying the resolution rule)
        cap_on_sphere: Rows report the clipped polar cap measure rather than
            the measure of the support
    """

    name: str
    dimension: int
    build: Callable[[int], tuple[MapExpr, ManifoldMesh]] = field(compare=False)
    cap_on_sphere: bool = False


@dataclass(frozen=True)
class EnergyRow:
    k: int
    energy: float
    cap_measure: float
    support_measure: float
    sup_df: float
    certificate: bool
    luxemburg: float
    reference: float
    degree: DegreeEstimate | None = None

    def to_dict(self) -> dict[str, Any]:
        data = {
            "k": self.k,
            "energy": self.energy,
            "cap_measure": self.cap_measure,
            "sup_df": self.sup_df,
            "bound_certificate": self.certificate,
            "support_measure": self.support_measure,
            "luxemburg": self.luxemburg,
            "reference": self.reference,
        }
        if self.degree is not None:
            data["degree"] = self.degree.rounded
            data["degree_residual"] = self.degree.residual
        return data


@dataclass(frozen=True)
class EnergyReport:
    """Rows in increasing k with the fitted slope and decay verdict."""

    family: str
    gauge: str
    dimension: int
    rows: tuple[EnergyRow, ...]
    slope: float | None
    reference_rate: float | None
    verdict: str
    diagnostic: str = ""

    @property
    def energies(self) -> np.ndarray:
        return np.array([row.energy for row in self.rows])

    @property
    def luxemburg_decays(self) -> bool:
        norms = np.array([row.luxemburg for row in self.rows])
        return bool(norms.size > 1 and np.all(np.diff(norms) < 0))

    @property
    def certificates_hold(self) -> bool:
        return all(row.certificate for row in self.rows)

    @property
    def degrees(self) -> list[int] | None:
        if any(row.degree is None for row in self.rows):
            return None
        return [row.degree.rounded for row in self.rows]

    @property
    def degree_constant(self) -> bool:
        """All rows share one nonzero degree."""
        degrees = self.degrees
        return bool(degrees) and len(set(degrees)) == 1 and degrees[0] != 0

    def to_dict(self) -> dict[str, Any]:
        data = {
            "family": self.family,
            "gauge": self.gauge,
            "dimension": self.dimension,
            "rows": [row.to_dict() for row in self.rows],
            "slope": self.slope,
            "reference_rate": self.reference_rate,
            "verdict": self.verdict,
            "luxemburg_decays": self.luxemburg_decays,
            "certificates_hold": self.certificates_hold,
        }
        if self.diagnostic:
            data["diagnostic"] = self.diagnostic
        if self.degrees is not None:
            data["degree_constant"] = self.degree_constant
        return data


def energy_row(family: ExperimentFamily, gauge: YoungFunction, k: int, with_degree: bool = False) -> EnergyRow:
    """Compute one experiment row."""
    map_expr, mesh = family.build(k)
    sample = differential(map_expr, mesh.coords)
    check_resolution(map_expr, mesh, sample)
    sampled = WeightedField(sample.hs_norm, mesh.weights)
    energy = orlicz_mean(sampled, gauge)
    support_measure = float(np.sum(mesh.weights[sample.hs_norm > 0]))
    cap = polar_cap_measure(mesh, 1.0 / k) if family.cap_on_sphere else support_measure
    sup_df = float(np.max(sample.hs_norm))
    certificate = energy <= eval_young(gauge, sup_df) * cap * (1.0 + CERTIFICATE_SLACK)
    degree = degree_by_jacobian(map_expr, mesh) if with_degree else None
    _LOGGER.debug("Row k=%d of %s: energy=%.6g sup|Df|=%.4g", k, family.name, energy, sup_df)
    return EnergyRow(
        k=k,
        energy=energy,
        cap_measure=cap,
        support_measure=support_measure,
        sup_df=sup_df,
        certificate=bool(certificate),
        luxemburg=luxemburg_norm(sampled, gauge) if energy > 0 else 0.0,
        reference=eval_young(gauge, float(k)) * float(k) ** (-family.dimension),
        degree=degree,
    )


def fit_slope(ks: Sequence[float], values: Sequence[float]) -> float | None:
    """Least-squares slope of log value against log k; None if a value is not positive."""
    values = np.asarray(values, dtype=float)
    if values.size < 2 or np.any(values <= 0):
        return None
    return float(np.polyfit(np.log(np.asarray(ks, dtype=float)), np.log(values), 1)[0])


def decay_verdict(rows: Sequence[EnergyRow], slope: float | None, gauge: YoungFunction, n: int) -> tuple[str, str]:
    """Classify the energies of an experiment.

    DecaysToZero needs strictly decreasing energies and either the power
    regime (slope <= -0.2 and last < first / 2) or the Orlicz regime
    (decaying reference P(k) k^-n, P(t) = o(t^n), and energy/reference
    within a factor-10 band). BoundedAway needs |slope| < 0.1 and the
    energies within a factor 2.

    Returns:
        (verdict, diagnostic)
    """
    energies = np.array([row.energy for row in rows])
    references = np.array([row.reference for row in rows])
    if slope is None:
        return VERDICT_INCONCLUSIVE, "energies are not all positive; no slope fitted"
    decreasing = bool(np.all(np.diff(energies) < 0))
    if decreasing and slope <= DECAY_SLOPE_MAX and energies[-1] < DECAY_END_RATIO * energies[0]:
        return VERDICT_DECAYS, ""
    if decreasing and references[-1] < references[0]:
        band = energies / references
        spread = float(band.max() / band.min())
        if spread <= REFERENCE_BAND_MAX and check_small_o(gauge, n).holds:
            return VERDICT_DECAYS, ""
    if abs(slope) < BOUNDED_SLOPE_MAX and energies.max() <= BOUNDED_SPREAD_MAX * energies.min():
        return VERDICT_BOUNDED, ""
    return VERDICT_INCONCLUSIVE, (
        f"slope {slope:.3f}, end ratio {energies[-1] / energies[0]:.3f}, "
        f"{'strictly decreasing' if decreasing else 'not strictly decreasing'}"
    )


def _normalize_k_list(k_list: Sequence[int]) -> list[int]:
    ks = sorted({int(k) for k in k_list})
    if len(ks) != len(list(k_list)):
        raise ConfigurationError(f"k values must be distinct, got {list(k_list)}")
    if len(ks) < MIN_K_VALUES:
        raise ConfigurationError(f"Need at least {MIN_K_VALUES} k values, got {ks}")
    if ks[0] < 1:
        raise ConfigurationError(f"k values must be >= 1, got {ks}")
    return ks


def _assemble(
    family: ExperimentFamily, gauge: YoungFunction, rows: Sequence[EnergyRow]
) -> EnergyReport:
    ks = [row.k for row in rows]
    slope = fit_slope(ks, [row.energy for row in rows])
    reference_rate = fit_slope(ks, [row.reference for row in rows])
    if len(rows) < 2:
        return EnergyReport(family.name, gauge.description, family.dimension, tuple(rows), slope,
                            reference_rate, VERDICT_INCONCLUSIVE, "fewer than two rows")
    verdict, diagnostic = decay_verdict(rows, slope, gauge, family.dimension)
    return EnergyReport(family.name, gauge.description, family.dimension, tuple(rows), slope,
                        reference_rate, verdict, diagnostic)


def decay_experiment(
    family: ExperimentFamily,
    gauge: YoungFunction,
    k_list: Sequence[int],
    threads: int = 1,
    with_degree: bool = False,
) -> EnergyReport:
    """Run a family over k_list and classify the energy decay.

    Rows are computed independently, in parallel when threads > 1, and
    assembled in increasing k.

    Raises:
        ConfigurationError: Fewer than four or repeated k values
        ResolutionError: A row violates the resolution rule; the exception
            carries the report of the rows before it as ``partial``
    """
    ks = _normalize_k_list(k_list)
    _LOGGER.info("Decay experiment %s with gauge %s over k=%s", family.name, gauge.description, ks)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(energy_row, family, gauge, k, with_degree) for k in ks]
        rows: list[EnergyRow] = []
        for k, future in zip(ks, futures):
            try:
                rows.append(future.result())
            except ResolutionError as err:
                partial = _assemble(family, gauge, rows) if rows else None
                _LOGGER.warning("Experiment %s aborted at k=%d: %s", family.name, k, err)
                raise ResolutionError(f"k={k}: {err}", partial=partial) from err
    report = _assemble(family, gauge, rows)
    if report.verdict == VERDICT_INCONCLUSIVE:
        _LOGGER.warning("Decay of %s is inconclusive: %s", family.name, report.diagnostic)
    return report

