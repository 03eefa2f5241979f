"""Mapping degree by Jacobian quadrature and by signed preimage counting.

The two methods are independent: the first integrates the signed Jacobian
over the domain mesh and divides by the target volume, the second locates
the preimages of a regular value and sums the signs of the Jacobian there.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from .const import (
    INTEGRALITY_THRESHOLD,
    MESH_KINDS,
    METHOD_JACOBIAN,
    METHOD_PREIMAGE,
    NEWTON_STEPS,
    NEWTON_TOL,
    POLE_EXCLUSION,
    ROOT_DEDUP_TOL,
    SPHERE_KINDS,
)
from .exceptions import ConfigurationError, NonIntegralDegreeError, RegularValueError, UnderResolutionError
from .map_families import MapExpr, check_resolution, differential
from .mesh import ManifoldMesh, integrate, periodic_axes

_LOGGER = logging.getLogger(__name__)

# Roots closer than this to a kink are treated as lying on it
KINK_TOL = 1e-9


@dataclass(frozen=True)
class DegreeEstimate:
    """A degree value with its provenance.

    Attributes:
        raw: Unrounded value (the signed preimage count for the preimage method)
        rounded: Nearest integer
        residual: |raw - rounded|
        method: "jacobian" or "preimage"
        preimages: Number of preimages found (preimage method only)
    """

    raw: float
    rounded: int
    residual: float
    method: str
    preimages: int | None = None

    def to_dict(self) -> dict[str, Any]:
        data = {"raw": self.raw, "rounded": self.rounded, "residual": self.residual, "method": self.method}
        if self.preimages is not None:
            data["preimages"] = self.preimages
        return data


def _require_equal_dimensions(map_expr: MapExpr, mesh: ManifoldMesh) -> None:
    if map_expr.domain != mesh.kind:
        raise ConfigurationError(f"Map {map_expr.descriptor} acts on {map_expr.domain}, mesh is {mesh.kind}")
    if map_expr.domain_dimension != map_expr.target_dimension:
        raise ConfigurationError(
            f"Degree needs equal dimensions, {map_expr.descriptor} maps "
            f"{map_expr.domain_dimension} to {map_expr.target_dimension}"
        )


# =============================================================================
# Jacobian quadrature
# =============================================================================

def degree_by_jacobian(
    map_expr: MapExpr, mesh: ManifoldMesh, target_volume: float | None = None
) -> DegreeEstimate:
    """Integrate J_f over the domain and divide by the target volume.

    Args:
        map_expr: Map between equal-dimensional kinds
        mesh: Domain mesh satisfying the resolution rule
        target_volume: Defaults to the analytic volume of the target kind

    Returns:
        DegreeEstimate with method "jacobian"

    Raises:
        ConfigurationError: Kind or dimension mismatch
        ResolutionError: Mesh below the resolution rule
        NonIntegralDegreeError: Residual >= 0.05
    """
    _require_equal_dimensions(map_expr, mesh)
    sample = differential(map_expr, mesh.coords)
    check_resolution(map_expr, mesh, sample)
    volume = MESH_KINDS[map_expr.target]["volume"] if target_volume is None else target_volume
    raw = integrate(mesh, sample.jacobian) / volume
    rounded = int(round(raw))
    residual = abs(raw - rounded)
    _LOGGER.debug("Jacobian degree of %s on %s: %.6f", map_expr.descriptor, mesh.descriptor, raw)
    if residual >= INTEGRALITY_THRESHOLD:
        raise NonIntegralDegreeError(raw, residual)
    return DegreeEstimate(raw, rounded, residual, METHOD_JACOBIAN)


# =============================================================================
# Preimage counting
# =============================================================================

def _wrap_residual(residual: np.ndarray, target: str) -> np.ndarray:
    for axis, period in periodic_axes(target):
        residual[..., axis] = np.mod(residual[..., axis] + 0.5 * period, period) - 0.5 * period
    return residual


def _corner_grid(mesh: ManifoldMesh) -> list[np.ndarray]:
    """Corner coordinates per axis; periodic axes drop the repeated last edge."""
    return [axis.edges[:-1] if axis.periodic else axis.edges for axis in mesh.axes]


def _cell_corners(values: np.ndarray, mesh: ManifoldMesh) -> list[np.ndarray]:
    """Corner values of every cell, one array per corner offset, each shaped (cells..., m)."""
    corners = []
    for offset in itertools.product((0, 1), repeat=mesh.dimension):
        shifted = values
        for position, (axis, step) in enumerate(zip(mesh.axes, offset)):
            if axis.periodic:
                shifted = np.roll(shifted, -step, axis=position)
            else:
                index = [slice(None)] * shifted.ndim
                index[position] = slice(step, step + axis.size)
                shifted = shifted[tuple(index)]
        corners.append(shifted)
    return corners


def _candidate_cells(map_expr: MapExpr, value: np.ndarray, mesh: ManifoldMesh) -> np.ndarray:
    """Cells whose corner residuals change sign in every target component."""
    axes = _corner_grid(mesh)
    grids = np.meshgrid(*axes, indexing="ij")
    points = np.stack([grid.ravel() for grid in grids], axis=1)
    residual = _wrap_residual(map_expr.evaluate(points) - value, map_expr.target)
    residual = residual.reshape(tuple(len(a) for a in axes) + (value.size,))
    corners = np.stack(_cell_corners(residual, mesh), axis=0)

    low = corners.min(axis=0)
    high = corners.max(axis=0)
    straddles = np.all((low <= 0) & (high >= 0), axis=-1)
    for axis, period in periodic_axes(map_expr.target):
        # a wrap jump inside the cell fakes a sign change
        straddles &= np.all(np.abs(corners[..., axis]) < 0.25 * period, axis=0)
    return np.argwhere(straddles)


def _newton(map_expr: MapExpr, start: np.ndarray, value: np.ndarray, mesh: ManifoldMesh) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Newton iteration in chart coordinates; returns (points, converged)."""
    points = start.copy()
    converged = np.zeros(len(points), dtype=bool)
    alive = np.ones(len(points), dtype=bool)
    for _ in range(NEWTON_STEPS):
        residual = _wrap_residual(map_expr.evaluate(points) - value, map_expr.target)
        converged = np.max(np.abs(residual), axis=1) < NEWTON_TOL
        active = alive & ~converged
        if not np.any(active):
            break
        chart = map_expr.chart_jacobian(points[active])
        det = np.linalg.det(chart)
        solvable = np.abs(det) > 1e-300
        update = np.zeros((int(active.sum()), points.shape[1]))
        if np.any(solvable):
            update[solvable] = np.linalg.solve(chart[solvable], residual[active][solvable][..., None])[..., 0]
        index = np.flatnonzero(active)
        alive[index[~solvable]] = False
        points[active] -= update
        points = _wrap_domain(points, mesh)
        alive &= _inside_domain(points, mesh)
    residual = _wrap_residual(map_expr.evaluate(points) - value, map_expr.target)
    converged = alive & (np.max(np.abs(residual), axis=1) < NEWTON_TOL)
    return points, converged


def _wrap_domain(points: np.ndarray, mesh: ManifoldMesh) -> np.ndarray:
    for position, axis in enumerate(mesh.axes):
        if axis.periodic:
            points[:, position] = axis.edges[0] + np.mod(points[:, position] - axis.edges[0], axis.period)
    return points


def _inside_domain(points: np.ndarray, mesh: ManifoldMesh) -> np.ndarray:
    inside = np.ones(len(points), dtype=bool)
    for position, axis in enumerate(mesh.axes):
        if not axis.periodic:
            inside &= (points[:, position] >= axis.edges[0]) & (points[:, position] <= axis.edges[-1])
    return inside


def _distinct_roots(points: np.ndarray, mesh: ManifoldMesh) -> np.ndarray:
    order = np.lexsort(points.T[::-1])
    kept: list[np.ndarray] = []
    for point in points[order]:
        duplicate = False
        for other in kept:
            delta = point - other
            for position, axis in enumerate(mesh.axes):
                if axis.periodic:
                    delta[position] = np.mod(delta[position] + 0.5 * axis.period, axis.period) - 0.5 * axis.period
            if np.max(np.abs(delta)) < ROOT_DEDUP_TOL:
                duplicate = True
                break
        if not duplicate:
            kept.append(point)
    return np.array(kept).reshape(-1, points.shape[1])


def degree_by_preimage(map_expr: MapExpr, value: Any, mesh: ManifoldMesh) -> DegreeEstimate:
    """Signed count of the preimages of a regular value.

    Cells whose corner residuals change sign in every target component are
    refined by Newton steps from the cell center; distinct roots contribute
    the sign of J_f.

    Args:
        map_expr: Map between equal-dimensional kinds
        value: Target chart point; on sphere targets its latitude must stay
            at least 0.1 away from both poles
        mesh: Domain mesh whose cells are scanned

    Raises:
        RegularValueError: Value near a pole, a preimage on the kink locus,
            or a critical preimage
        UnderResolutionError: A candidate cell that Newton cannot resolve
    """
    _require_equal_dimensions(map_expr, mesh)
    value = np.asarray(value, dtype=float).ravel()
    if value.size != map_expr.target_dimension:
        raise ConfigurationError(f"Value {value.tolist()} does not fit target {map_expr.target}")
    if map_expr.target in SPHERE_KINDS:
        latitude = value[-1]
        if not POLE_EXCLUSION <= latitude <= np.pi - POLE_EXCLUSION:
            raise RegularValueError(
                f"Value latitude {latitude:.4f} is within {POLE_EXCLUSION} of a pole; choose another value"
            )

    cells = _candidate_cells(map_expr, value, mesh)
    if cells.size == 0:
        _LOGGER.debug("No preimages of %s under %s", value.tolist(), map_expr.descriptor)
        return DegreeEstimate(0.0, 0, 0.0, METHOD_PREIMAGE, preimages=0)
    midpoints = [axis.midpoints for axis in mesh.axes]
    start = np.stack([midpoints[position][cells[:, position]] for position in range(mesh.dimension)], axis=1)
    roots, converged = _newton(map_expr, start, value, mesh)
    if not np.all(converged):
        bad = start[~converged][0].tolist()
        raise UnderResolutionError(
            f"{int((~converged).sum())} candidate cells did not resolve to a preimage (first near {bad}); "
            "refine the mesh"
        )

    roots = _distinct_roots(roots, mesh)
    margin = map_expr.smooth_margin(roots)
    if np.any(margin < KINK_TOL):
        raise RegularValueError(f"Preimage {roots[np.argmin(margin)].tolist()} lies on the non-smooth locus")
    jacobian = differential(map_expr, roots).jacobian
    if np.any(np.abs(jacobian) < 1e-12):
        raise RegularValueError(f"Value {value.tolist()} is critical for {map_expr.descriptor}")
    count = int(np.sum(np.sign(jacobian)))
    _LOGGER.debug("Preimage degree of %s: %d from %d roots", map_expr.descriptor, count, len(roots))
    return DegreeEstimate(float(count), count, 0.0, METHOD_PREIMAGE, preimages=len(roots))
