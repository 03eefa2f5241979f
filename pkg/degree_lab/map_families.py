"""Analytic map families between meshes and their exact differentials.

Maps act on batches of chart points, shape (points, dimension). The
differential is reported in orthonormal frames: with A the chart Jacobian
and h the chart scale factors,

    D = diag(h_target(f(x))) A diag(1 / h_domain(x))

The signed Jacobian is the determinant of D times the orientation signs of
the two chart orderings.

Bubble and Collapse are Lipschitz, with a kink on a measure-zero set. The
kink locus is reported by ``smooth_margin`` and excluded from differentials.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .const import (
    BUBBLE_CELLS_PER_K,
    DEFAULT_COLLAPSE_CENTER,
    DEFAULT_COLLAPSE_RADIUS,
    FD_RTOL,
    FD_SMOOTH_MARGIN,
    FD_STEP,
    MESH_KINDS,
    MESH_S2,
    MESH_T2,
    MIN_SUPPORT_CELLS,
    SINGULAR_LOCUS_TOL,
    SPHERE_KINDS,
)
from .exceptions import ConfigurationError, ResolutionError, SingularLocusError
from .mesh import ManifoldMesh, build_mesh, periodic_axes, polar_cap_measure, scale_factors

_LOGGER = logging.getLogger(__name__)


# =============================================================================
# Differential samples
# =============================================================================

@dataclass(frozen=True, eq=False)
class DifferentialSample:
    """Differential data at a batch of points.

    Attributes:
        matrix: Orthonormal-frame differentials, shape (points, m, d)
        singular_values: Shape (points, min(m, d)), descending
        hs_norm: Hilbert-Schmidt norm |Df|
        jacobian: Signed Jacobian J_f, None for unequal dimensions
    """

    matrix: np.ndarray
    singular_values: np.ndarray
    hs_norm: np.ndarray
    jacobian: np.ndarray | None


# =============================================================================
# Map expressions
# =============================================================================

class MapExpr:
    """Base class of analytic maps between mesh kinds."""

    domain: str
    target: str

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        """Derivative in chart coordinates, shape (points, m, d)."""
        raise NotImplementedError

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        chart = self.chart_jacobian(coords)
        target_scale = scale_factors(self.target, self.evaluate(coords))
        domain_scale = scale_factors(self.domain, coords)
        return target_scale[:, :, None] * chart / domain_scale[:, None, :]

    def smooth_margin(self, coords: np.ndarray) -> np.ndarray:
        """Chart distance from each point to the non-smooth locus."""
        return np.full(len(coords), np.inf)

    def factors(self) -> tuple[MapExpr, ...]:
        return (self,)

    @property
    def domain_dimension(self) -> int:
        return MESH_KINDS[self.domain]["dimension"]

    @property
    def target_dimension(self) -> int:
        return MESH_KINDS[self.target]["dimension"]

    def __repr__(self) -> str:
        return f"MapExpr({self.descriptor})"


@dataclass(frozen=True, repr=False)
class Bubble(MapExpr):
    """Stretches the cap {theta <= 1/k} onto the sphere; the rest goes to the south pole."""

    k: int
    on: str = MESH_S2

    def __post_init__(self) -> None:
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ConfigurationError(f"Bubble needs an integer k >= 1, got {self.k}")
        if self.on not in SPHERE_KINDS:
            raise ConfigurationError(f"Bubble maps act on spheres, got '{self.on}'")

    @property
    def domain(self) -> str:
        return self.on

    @property
    def target(self) -> str:
        return self.on

    @property
    def descriptor(self) -> str:
        return f"bubble:k={self.k}" + ("" if self.on == MESH_S2 else f",on={self.on}")

    def _in_cap(self, coords: np.ndarray) -> np.ndarray:
        return coords[:, -1] <= 1.0 / self.k

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        out = np.array(coords, dtype=float)
        out[:, -1] = np.where(self._in_cap(coords), self.k * math.pi * coords[:, -1], math.pi)
        return out

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        size = coords.shape[1]
        inside = self._in_cap(coords)
        chart = np.zeros((len(coords), size, size))
        chart[inside] = np.eye(size)
        chart[inside, -1, -1] = self.k * math.pi
        return chart

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        size = coords.shape[1]
        theta = coords[:, -1]
        inside = self._in_cap(coords)
        stretch = np.zeros(len(coords))
        stretch[inside] = np.sin(self.k * math.pi * theta[inside]) / np.sin(theta[inside])
        matrix = np.zeros((len(coords), size, size))
        for position in range(size - 1):
            matrix[:, position, position] = stretch
        matrix[inside, -1, -1] = self.k * math.pi
        return matrix

    def smooth_margin(self, coords: np.ndarray) -> np.ndarray:
        return np.abs(coords[:, -1] - 1.0 / self.k)


@dataclass(frozen=True, repr=False)
class PowerMap(MapExpr):
    """(phi, theta) -> (d phi mod 2 pi, theta) on S2."""

    d: int

    domain = MESH_S2
    target = MESH_S2

    def __post_init__(self) -> None:
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise ConfigurationError(f"Power map needs an integer d, got {self.d}")

    @property
    def descriptor(self) -> str:
        return f"power:d={self.d}"

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        out = np.array(coords, dtype=float)
        out[:, 0] = np.mod(self.d * coords[:, 0], 2.0 * math.pi)
        return out

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        chart = np.zeros((len(coords), 2, 2))
        chart[:, 0, 0] = self.d
        chart[:, 1, 1] = 1.0
        return chart

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        # theta is preserved, so the phi scale factors cancel
        return self.chart_jacobian(coords)


@dataclass(frozen=True, repr=False)
class Collapse(MapExpr):
    """Disk of radius rho about center on T2 onto S2, the complement to the south pole.

    Inside the disk, phi' is the polar angle about the center and
    theta' = pi r / rho. Distances are periodic on the torus.
    """

    center: tuple[float, float] = DEFAULT_COLLAPSE_CENTER
    rho: float = DEFAULT_COLLAPSE_RADIUS

    domain = MESH_T2
    target = MESH_S2

    def __post_init__(self) -> None:
        if not 0.0 < self.rho < 0.5:
            raise ConfigurationError(f"Collapse radius must satisfy 0 < rho < 1/2, got {self.rho}")
        if len(self.center) != 2 or not all(0.0 <= c < 1.0 for c in self.center):
            raise ConfigurationError(f"Collapse center must lie in [0, 1)^2, got {self.center}")

    @property
    def descriptor(self) -> str:
        text = f"collapse:rho={self.rho:g}"
        if tuple(self.center) != DEFAULT_COLLAPSE_CENTER:
            text += f",cx={self.center[0]:g},cy={self.center[1]:g}"
        return text

    def _offsets(self, coords: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        shift = np.mod(coords - np.asarray(self.center) + 0.5, 1.0) - 0.5
        vx, vy = shift[:, 0], shift[:, 1]
        return vx, vy, np.hypot(vx, vy)

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        vx, vy, r = self._offsets(coords)
        inside = r < self.rho
        phi = np.mod(np.arctan2(vy, vx), 2.0 * math.pi)
        theta = np.where(inside, math.pi * r / self.rho, math.pi)
        return np.stack((phi, theta), axis=1)

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        vx, vy, r = self._offsets(coords)
        inside = (r < self.rho) & (r > 0)
        chart = np.zeros((len(coords), 2, 2))
        rr = r[inside]
        chart[inside, 0, 0] = -vy[inside] / rr ** 2
        chart[inside, 0, 1] = vx[inside] / rr ** 2
        chart[inside, 1, 0] = math.pi / self.rho * vx[inside] / rr
        chart[inside, 1, 1] = math.pi / self.rho * vy[inside] / rr
        return chart

    def smooth_margin(self, coords: np.ndarray) -> np.ndarray:
        _, _, r = self._offsets(coords)
        # the center is a chart singularity of phi'
        return np.minimum(np.abs(r - self.rho), r)


@dataclass(frozen=True, repr=False)
class Identity(MapExpr):
    """Identity map of a mesh kind."""

    on: str = MESH_S2

    def __post_init__(self) -> None:
        _require_kind(self.on)

    @property
    def domain(self) -> str:
        return self.on

    @property
    def target(self) -> str:
        return self.on

    @property
    def descriptor(self) -> str:
        return "identity" + ("" if self.on == MESH_S2 else f":on={self.on}")

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return np.array(coords, dtype=float)

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.eye(coords.shape[1]), (len(coords), coords.shape[1], coords.shape[1])).copy()

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        return self.chart_jacobian(coords)


@dataclass(frozen=True, repr=False)
class Constant(MapExpr):
    """Constant map to a chart point of the target kind."""

    on: str = MESH_S2
    to_kind: str = MESH_S2
    point: tuple[float, ...] = (0.0, math.pi)

    def __post_init__(self) -> None:
        _require_kind(self.on)
        _require_kind(self.to_kind)
        if len(self.point) != MESH_KINDS[self.to_kind]["dimension"]:
            raise ConfigurationError(f"Constant point {self.point} does not match target kind {self.to_kind}")

    @property
    def domain(self) -> str:
        return self.on

    @property
    def target(self) -> str:
        return self.to_kind

    @property
    def descriptor(self) -> str:
        return f"constant:on={self.on},to={self.to_kind}"

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return np.tile(np.asarray(self.point, dtype=float), (len(coords), 1))

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        return np.zeros((len(coords), len(self.point), coords.shape[1]))

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        return self.chart_jacobian(coords)


@dataclass(frozen=True, repr=False)
class Compose(MapExpr):
    """Composition maps[0] o maps[1] o ... o maps[-1], applied right-to-left."""

    maps: tuple[MapExpr, ...]

    def __post_init__(self) -> None:
        if not self.maps:
            raise ConfigurationError("Compose needs at least one map")
        for outer, inner in zip(self.maps, self.maps[1:]):
            if outer.domain != inner.target:
                raise ConfigurationError(
                    f"Cannot compose {outer.descriptor} after {inner.descriptor}: "
                    f"{inner.target} does not match {outer.domain}"
                )

    @property
    def domain(self) -> str:
        return self.maps[-1].domain

    @property
    def target(self) -> str:
        return self.maps[0].target

    @property
    def descriptor(self) -> str:
        return "compose:" + "|".join(m.descriptor for m in self.maps)

    def _stages(self, coords: np.ndarray) -> list[np.ndarray]:
        """Input points of every factor, innermost first, then the final image."""
        points = [np.asarray(coords, dtype=float)]
        for factor in reversed(self.maps):
            points.append(factor.evaluate(points[-1]))
        return points

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        return self._stages(coords)[-1]

    def chart_jacobian(self, coords: np.ndarray) -> np.ndarray:
        stages = self._stages(coords)
        total = None
        for factor, point in zip(reversed(self.maps), stages):
            step = factor.chart_jacobian(point)
            total = step if total is None else step @ total
        return total

    def orthonormal_differential(self, coords: np.ndarray) -> np.ndarray:
        stages = self._stages(coords)
        total = None
        for factor, point in zip(reversed(self.maps), stages):
            step = factor.orthonormal_differential(point)
            total = step if total is None else step @ total
        return total

    def smooth_margin(self, coords: np.ndarray) -> np.ndarray:
        stages = self._stages(coords)
        margin = np.full(len(coords), np.inf)
        for factor, point in zip(reversed(self.maps), stages):
            margin = np.minimum(margin, factor.smooth_margin(point))
        return margin

    def factors(self) -> tuple[MapExpr, ...]:
        flat: list[MapExpr] = []
        for factor in self.maps:
            flat.extend(factor.factors())
        return tuple(flat)


def _require_kind(kind: str) -> None:
    if kind not in MESH_KINDS:
        raise ConfigurationError(f"Unknown mesh kind '{kind}'")


# =============================================================================
# Operations
# =============================================================================

def _as_batch(point: Any, size: int) -> tuple[np.ndarray, bool]:
    arr = np.asarray(point, dtype=float)
    single = arr.ndim == 1
    batch = np.atleast_2d(arr)
    if batch.shape[1] != size:
        raise TypeError(f"Point has {batch.shape[1]} chart coordinates, map domain needs {size}")
    return batch, single


def evaluate(map_expr: MapExpr, point: Any) -> np.ndarray:
    """Image of one chart point (shape (d,)) or a batch (shape (points, d)).

    Raises:
        TypeError: If the point does not fit the domain chart
    """
    batch, single = _as_batch(point, map_expr.domain_dimension)
    image = map_expr.evaluate(batch)
    return image[0] if single else image


def differential(map_expr: MapExpr, point: Any) -> DifferentialSample:
    """Singular values, Hilbert-Schmidt norm and signed Jacobian.

    Raises:
        SingularLocusError: If any point lies within 1e-12 of the kink locus
    """
    batch, _ = _as_batch(point, map_expr.domain_dimension)
    margin = map_expr.smooth_margin(batch)
    if np.any(margin < SINGULAR_LOCUS_TOL):
        bad = int(np.flatnonzero(margin < SINGULAR_LOCUS_TOL)[0])
        raise SingularLocusError(
            f"{map_expr.descriptor} is not differentiable at {batch[bad].tolist()} (node {bad})"
        )
    matrix = map_expr.orthonormal_differential(batch)
    return sample_from_matrix(matrix, map_expr.target, map_expr.domain)


def sample_from_matrix(matrix: np.ndarray, target: str, domain: str) -> DifferentialSample:
    singular = np.linalg.svd(matrix, compute_uv=False)
    hs_norm = np.sqrt(np.sum(matrix ** 2, axis=(1, 2)))
    jacobian = None
    if matrix.shape[1] == matrix.shape[2]:
        sign = MESH_KINDS[target]["orientation"] * MESH_KINDS[domain]["orientation"]
        jacobian = sign * np.linalg.det(matrix)
    return DifferentialSample(matrix, singular, hs_norm, jacobian)


def support_mask(map_expr: MapExpr, mesh: ManifoldMesh) -> np.ndarray:
    """Nodes where the differential is nonzero."""
    return differential(map_expr, mesh.coords).hs_norm > 0


def bubble_orders(map_expr: MapExpr) -> list[int]:
    return [factor.k for factor in map_expr.factors() if isinstance(factor, Bubble)]


def check_resolution(map_expr: MapExpr, mesh: ManifoldMesh, sample: DifferentialSample | None = None) -> None:
    """Enforce the resolution rule for maps with localized differentials.

    On sphere meshes N_theta >= 64 k for the largest Bubble(k) factor. On
    other meshes the support must span at least 20 cells along some axis.

    Raises:
        ConfigurationError: If the map and mesh kinds differ
        ResolutionError: If the mesh is too coarse
    """
    if map_expr.domain != mesh.kind:
        raise ConfigurationError(f"Map {map_expr.descriptor} acts on {map_expr.domain}, mesh is {mesh.kind}")
    orders = bubble_orders(map_expr)
    localized = orders or any(isinstance(f, Collapse) for f in map_expr.factors())
    if not localized:
        return
    if mesh.is_sphere and orders:
        needed = BUBBLE_CELLS_PER_K * max(orders)
        have = mesh.axis("theta").size
        if have < needed:
            raise ResolutionError(f"N_theta = {have} is below {needed} for bubble order {max(orders)}")
        return
    if sample is None:
        sample = differential(map_expr, mesh.coords)
    support = (sample.hs_norm > 0).reshape(mesh.shape)
    spans = []
    for position in range(mesh.dimension):
        others = tuple(a for a in range(mesh.dimension) if a != position)
        spans.append(int(np.count_nonzero(np.any(support, axis=others))))
    if max(spans) < MIN_SUPPORT_CELLS:
        raise ResolutionError(
            f"Support of {map_expr.descriptor} spans at most {max(spans)} cells on {mesh.descriptor}, "
            f"need {MIN_SUPPORT_CELLS}"
        )


def cap_measure(k: int, n: int = 2) -> float:
    """Quadrature measure of the polar cap {theta <= 1/k} on S^n at N_theta = 64 k.

    Example:
        >>> cap_measure(1, 2)  # 2 pi (1 - cos 1)
        2.888...
    """
    if k < 1:
        raise ConfigurationError(f"Cap order must be >= 1, got {k}")
    kind = {2: "s2", 3: "s3"}.get(n)
    if kind is None:
        raise ConfigurationError(f"Cap measures are available on S2 and S3, got n={n}")
    resolution = (BUBBLE_CELLS_PER_K * k,) + (16,) * (n - 1)
    return polar_cap_measure(build_mesh(kind, resolution), 1.0 / k)


# =============================================================================
# Finite-difference cross-check
# =============================================================================

@dataclass(frozen=True)
class FiniteDifferenceReport:
    """Largest relative disagreement between analytic and difference quotients."""

    map_descriptor: str
    nodes_checked: int
    max_error_hs: float
    max_error_jacobian: float
    tolerance: float = FD_RTOL

    @property
    def passed(self) -> bool:
        return self.nodes_checked > 0 and max(self.max_error_hs, self.max_error_jacobian) < self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "map": self.map_descriptor,
            "nodes_checked": self.nodes_checked,
            "max_error_hs": self.max_error_hs,
            "max_error_jacobian": self.max_error_jacobian,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def finite_difference_matrix(map_expr: MapExpr, coords: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Central-difference orthonormal differential, with periodic target axes unwrapped."""
    coords = np.asarray(coords, dtype=float)
    size = coords.shape[1]
    image = map_expr.evaluate(coords)
    chart = np.zeros((len(coords), image.shape[1], size))
    for position in range(size):
        offset = np.zeros(size)
        offset[position] = step
        delta = map_expr.evaluate(coords + offset) - map_expr.evaluate(coords - offset)
        for axis, period in periodic_axes(map_expr.target):
            delta[:, axis] = np.mod(delta[:, axis] + 0.5 * period, period) - 0.5 * period
        chart[:, :, position] = delta / (2.0 * step)
    target_scale = scale_factors(map_expr.target, image)
    domain_scale = scale_factors(map_expr.domain, coords)
    return target_scale[:, :, None] * chart / domain_scale[:, None, :]


def finite_difference_check(
    map_expr: MapExpr, mesh: ManifoldMesh, count: int = 100, seed: int = 0
) -> FiniteDifferenceReport:
    """Compare analytic |Df| and J with central differences at random smooth nodes.

    Nodes are drawn from the support of the differential when it is not
    empty, always at least 1e-3 away from the kink locus in every factor chart.
    """
    if map_expr.domain != mesh.kind:
        raise ConfigurationError(f"Map {map_expr.descriptor} acts on {map_expr.domain}, mesh is {mesh.kind}")
    coords = mesh.coords
    eligible = map_expr.smooth_margin(coords) >= FD_SMOOTH_MARGIN
    analytic = differential(map_expr, coords[eligible]) if np.any(eligible) else None
    candidates = np.flatnonzero(eligible)
    if analytic is not None and np.any(analytic.hs_norm > 0):
        candidates = candidates[analytic.hs_norm > 0]
    if candidates.size == 0:
        return FiniteDifferenceReport(map_expr.descriptor, 0, math.inf, math.inf)

    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(candidates, size=min(count, candidates.size), replace=False))
    points = coords[chosen]
    exact = differential(map_expr, points)
    approx = sample_from_matrix(finite_difference_matrix(map_expr, points), map_expr.target, map_expr.domain)

    hs_error = np.abs(approx.hs_norm - exact.hs_norm) / np.maximum(exact.hs_norm, 1.0)
    jac_error = 0.0
    if exact.jacobian is not None:
        jac_error = float(np.max(np.abs(approx.jacobian - exact.jacobian) / np.maximum(np.abs(exact.jacobian), 1.0)))
    report = FiniteDifferenceReport(map_expr.descriptor, int(chosen.size), float(np.max(hs_error)), jac_error)
    _LOGGER.debug("Finite-difference check %s", report.to_dict())
    return report


def compose(maps: Sequence[MapExpr]) -> MapExpr:
    """Single map or Compose of several, applied right-to-left."""
    return maps[0] if len(maps) == 1 else Compose(tuple(maps))
